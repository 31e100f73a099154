// End-to-end checks against the installed CLI binary: every subcommand,
// exit-code contract, and on-disk artifact round trips.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fixture.hpp"
#include "opus/formats.hpp"
#include "opus/io.hpp"

namespace fs = std::filesystem;

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
  std::cout << (ok ? "ok   " : "FAIL ") << what << "\n";
  if (!ok) ++failures;
}

int run(const std::string& cmd) {
  const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WEXITSTATUS(status);
}

std::string run_capture(const std::string& cmd, int& exit_code) {
  const std::string out_path = opus::testsupport::make_temp_dir("cli_cap") + "/out.txt";
  const int status = std::system((cmd + " >" + out_path + " 2>&1").c_str());
  exit_code = WEXITSTATUS(status);
  std::ifstream in(out_path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::uint8_t> slurp(const std::string& path) {
  return opus::io::read_file(path);
}

}  // namespace

int main() {
  const std::string cli = OPUS_CLI_PATH;
  const std::string work = opus::testsupport::make_temp_dir("cli");
  const std::string corpus = work + "/corpus";

  opus::testsupport::FixtureOptions opts;
  opts.files = 10;
  opts.topics = 3;
  opts.tokens_min = 50;
  opts.tokens_max = 90;
  opts.seed = 12;
  opus::testsupport::generate_desk_corpus(corpus, opts);

  // keygen determinism and validation.
  check(run(cli + " keygen --dim 32 --seed 7 --out " + work + "/a.key") == 0, "keygen runs");
  check(run(cli + " keygen --dim 32 --seed 7 --out " + work + "/b.key") == 0, "keygen reruns");
  check(slurp(work + "/a.key") == slurp(work + "/b.key"), "same seed gives identical key files");
  check(run(cli + " keygen --dim 1 --seed 7 --out " + work + "/bad.key") == 2,
        "dim 1 fails validation with exit 2");
  check(run(cli + " keygen --dim 32 --seed 7 --out /nonexistent/dir/key") == 2,
        "unwritable output path exits 2");

  // index: corpus -> encrypted signed tree.
  check(run(cli + " index --corpus " + corpus + " --key " + work + "/a.key --out " + work +
            "/idx.hit --seed 21") == 0,
        "index builds");
  {
    opus::SignedIndex idx = opus::read_index(work + "/idx.hit");
    check(idx.tree.leaf_count == 10, "index has one leaf per file");
    check(fs::exists(work + "/idx.hit.pub"), "owner public key emitted");
    check(fs::exists(work + "/idx.hit.corpus"), "corpus manifest emitted");
    std::ifstream manifest(work + "/idx.hit.corpus");
    std::string line;
    std::getline(manifest, line);
    check(line == "OPUS-CORPUS/1", "manifest carries the format header");
  }
  check(run(cli + " index --corpus " + work + "/empty --key " + work + "/a.key --out " + work +
            "/none.hit") == 2,
        "missing corpus directory exits 2");
  fs::create_directories(work + "/empty");
  check(run(cli + " index --corpus " + work + "/empty --key " + work + "/a.key --out " + work +
            "/none.hit") == 3,
        "empty corpus exits 3");

  // Same seed: identical topology, fresh ciphertext bytes.
  check(run(cli + " index --corpus " + corpus + " --key " + work + "/a.key --out " + work +
            "/idx2.hit --seed 21") == 0,
        "index rebuilds");
  {
    opus::SignedIndex a = opus::read_index(work + "/idx.hit");
    opus::SignedIndex b = opus::read_index(work + "/idx2.hit");
    bool same_topology = a.tree.nodes.size() == b.tree.nodes.size() &&
                         a.tree.root_id == b.tree.root_id;
    if (same_topology) {
      for (std::size_t i = 0; i < a.tree.nodes.size(); ++i) {
        same_topology = same_topology &&
                        a.tree.nodes[i].children == b.tree.nodes[i].children &&
                        a.tree.nodes[i].doc_id == b.tree.nodes[i].doc_id;
      }
    }
    check(same_topology, "same seed reproduces the tree topology");
    check(slurp(work + "/idx.hit") != slurp(work + "/idx2.hit"),
          "ciphertext bytes differ across runs");
  }

  // query: trapdoors are randomized but score-equivalent.
  check(run(cli + " query --keywords \"silver lantern harvest\" --key " + work +
            "/a.key --out " + work + "/q1.trap") == 0,
        "query builds a trapdoor");
  check(run(cli + " query --keywords \"silver lantern harvest\" --key " + work +
            "/a.key --out " + work + "/q2.trap") == 0,
        "query reruns");
  check(slurp(work + "/q1.trap") != slurp(work + "/q2.trap"),
        "identical queries produce different trapdoor bytes");
  check(run(cli + " query --keywords \"\" --key " + work + "/a.key --out " + work +
            "/q3.trap") == 3,
        "empty keyword list exits 3");

  // search: tree and linear, ranked output plus proof.
  int code = 0;
  std::string out = run_capture(cli + " search --index " + work + "/idx.hit --trapdoor " + work +
                                    "/q1.trap -k 3 --proof " + work + "/p1.proof",
                                code);
  check(code == 0, "tree search runs");
  check(out.find("doc ") != std::string::npos, "search prints ranked docs");
  check(fs::exists(work + "/p1.proof"), "search writes a proof");

  std::string out2 = run_capture(cli + " search --index " + work + "/idx.hit --trapdoor " + work +
                                     "/q2.trap -k 3 --linear --proof " + work + "/p2.proof",
                                 code);
  check(code == 0, "linear search runs");
  {
    // Same query, two trapdoors: identical ranked doc ids.
    auto docs = [](const std::string& text) {
      std::vector<std::string> ids;
      std::istringstream in(text);
      std::string line;
      while (std::getline(in, line)) {
        if (line.rfind("doc ", 0) == 0) ids.push_back(line.substr(4, line.find(" score") - 4));
      }
      return ids;
    };
    check(!docs(out).empty() && docs(out) == docs(out2),
          "tree and linear agree on this small index");
  }

  std::string short_out = run_capture(cli + " search --index " + work + "/idx.hit --trapdoor " +
                                          work + "/q1.trap -k 99 --proof " + work + "/p3.proof",
                                      code);
  check(code == 0 && short_out.find("short-result") != std::string::npos,
        "k beyond the corpus reports a short result");

  check(run(cli + " keygen --dim 16 --seed 9 --out " + work + "/small.key") == 0,
        "second key for mismatch test");
  check(run(cli + " query --keywords \"silver\" --key " + work + "/small.key --out " + work +
            "/mismatch.trap") == 0,
        "mismatched trapdoor builds");
  check(run(cli + " search --index " + work + "/idx.hit --trapdoor " + work +
            "/mismatch.trap -k 3") == 4,
        "dimension mismatch exits 4");

  // verify: accept, tamper-reject, malformed.
  check(run(cli + " verify --proof " + work + "/p1.proof --pubkey " + work + "/idx.hit.pub") == 0,
        "fresh proof verifies");
  check(run(cli + " verify --proof " + work + "/p2.proof --pubkey " + work + "/idx.hit.pub") == 0,
        "linear-mode proof verifies");
  {
    auto bytes = slurp(work + "/p1.proof");
    bytes[bytes.size() / 2] ^= 0x01;
    opus::io::write_file(work + "/tampered.proof", bytes);
  }
  check(run(cli + " verify --proof " + work + "/tampered.proof --pubkey " + work +
            "/idx.hit.pub") == 5,
        "tampered proof exits 5");
  check(run(cli + " verify --proof " + work + "/missing.proof --pubkey " + work +
            "/idx.hit.pub") == 6,
        "missing proof file exits 6");
  {
    std::ofstream junk(work + "/junk.proof", std::ios::binary);
    junk << "not a proof";
  }
  check(run(cli + " verify --proof " + work + "/junk.proof --pubkey " + work + "/idx.hit.pub") ==
            6,
        "malformed proof exits 6");

  // eval: smoke run over the bundled fixture pairs.
  {
    std::ofstream cfg(work + "/eval.json");
    cfg << R"({"scheme":"opu","bloom_bits":96,"top_k":4,"query_count":6,)"
        << R"("mutation_count":1,"anagrams_per_query":1,"anagram_files":2,)"
        << R"("anagram_pairs_path":")" << OPUS_FIXTURE_DIR << R"(/anagram_pairs.txt",)"
        << R"("seed":5})";
  }
  check(run(cli + " eval --corpus " + corpus + " --config " + work + "/eval.json --out " + work +
            "/report.json --csv " + work + "/report.csv") == 0,
        "eval runs");
  {
    std::ifstream report(work + "/report.json");
    std::stringstream buf;
    buf << report.rdbuf();
    check(buf.str().find("\"accuracy\"") != std::string::npos, "report has accuracy fields");
    check(fs::exists(work + "/report.csv"), "csv series emitted");
  }
  int rc1 = 0;
  std::string rep1 = run_capture(cli + " eval --corpus " + corpus + " --config " + work +
                                     "/eval.json --out " + work + "/r1.json",
                                 rc1);
  int rc2 = 0;
  std::string rep2 = run_capture(cli + " eval --corpus " + corpus + " --config " + work +
                                     "/eval.json --out " + work + "/r2.json",
                                 rc2);
  {
    auto accuracy_line = [](const std::string& text) {
      const auto pos = text.find("accuracy=");
      const auto end = text.find('\n', pos);
      return text.substr(pos, end - pos);
    };
    check(rc1 == 0 && rc2 == 0 && accuracy_line(rep1) == accuracy_line(rep2),
          "eval accuracy is reproducible under a fixed seed");
  }

  // Unknown subcommand maps to the usage exit code.
  check(run(cli + " frobnicate") == 2, "unknown subcommand exits 2");

  std::cout << (failures == 0 ? "ALL OK" : "FAILURES: " + std::to_string(failures)) << "\n";
  fs::remove_all(work);
  return failures == 0 ? 0 : 1;
}
