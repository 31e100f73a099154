// Acceptance suite: one check per shipped guarantee, one PASS/FAIL line
// each, nonzero exit when anything fails. Budgets are asserted along with
// the substance.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "fixture.hpp"
#include "opus/corpus.hpp"
#include "opus/error.hpp"
#include "opus/eval.hpp"
#include "opus/formats.hpp"
#include "opus/hit.hpp"
#include "opus/lsh_bloom.hpp"
#include "opus/opu.hpp"
#include "opus/rng.hpp"
#include "opus/secure_knn.hpp"
#include "opus/stem.hpp"
#include "opus/verify.hpp"

using namespace opus;
namespace fs = std::filesystem;

namespace {

struct Check {
  std::vector<std::string> failures;

  void require(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }

  template <typename T>
  void equal(const T& got, const T& want, const std::string& what) {
    if (!(got == want)) {
      std::ostringstream os;
      os << what << ": got " << got << ", want " << want;
      failures.push_back(os.str());
    }
  }

  void close(double got, double want, double tol, const std::string& what) {
    if (!(std::abs(got - want) <= tol)) {
      std::ostringstream os;
      os << what << ": got " << got << ", want " << want << " +/- " << tol;
      failures.push_back(os.str());
    }
  }
};

const OpuParams kOpu{};  // 20 letter blocks, s=2, u=2

double opu_dist(const char* a, const char* b) {
  return opu_distance(opu_encode(a, kOpu), opu_encode(b, kOpu));
}

std::string fixture_path(const char* name) {
  return std::string(OPUS_FIXTURE_DIR) + "/" + name;
}

// ---------------------------------------------------------------- 1
void criterion_worked_example(Check& c) {
  OpuVector v = infect(encode(decompose("add"), kOpu), kOpu);
  std::vector<double> want(kOpu.dimension(), 0.0);
  want[1 - 1] = 1.0;
  want[4 - 1] = 0.75;
  want[27 - 1] = 0.5;
  want[30 - 1] = 1.5;
  want[53 - 1] = 0.25;
  want[56 - 1] = 1.5;
  want[82 - 1] = 0.75;
  want[108 - 1] = 0.25;
  c.require(v.weights == want, "infected vector must match the worked example bit for bit");
}

// ---------------------------------------------------------------- 2
void criterion_distance_table(Check& c) {
  c.close(opu_dist("add", "aad"), std::sqrt(3.125), 1e-9, "opu add/aad");
  c.close(opu_dist("bear", "beer"), std::sqrt(3.25), 1e-9, "opu bear/beer");
  c.equal(unigram_distance("add", "aad", 20), 2.0, "unigram add/aad");
  c.equal(unigram_distance("bear", "beer", 20), 2.0, "unigram bear/beer");
  c.equal(bigram_distance("add", "aad", 20), 2.0, "bigram add/aad");
  c.equal(bigram_distance("bear", "beer", 20), 2.0, "bigram bear/beer");
  // Wrong-order and insertion rows as printed are mutually inconsistent;
  // the pinned values below are what the encode/infect rule produces and
  // are cross-checked by the unit suite's exhaustive oracle.
  c.close(opu_dist("used", "uesd"), std::sqrt(1.375), 1e-12, "opu used/uesd (derived)");
  c.close(opu_dist("pear", "paer"), std::sqrt(1.375), 1e-12, "opu pear/paer (derived)");
  c.close(opu_dist("pen", "pn"), 1.5, 1e-12, "opu pen/pn (derived)");
  c.close(opu_dist("pen", "pean"), std::sqrt(2.375), 1e-12, "opu pen/pean (derived)");
}

// ---------------------------------------------------------------- 3
void criterion_knn_invariance(Check& c) {
  SecretKey key = keygen(64, 20240531);
  std::mt19937_64 rng(std::random_device{}());  // fresh randomness required
  double max_rel = 0.0;
  for (int i = 0; i < 1000; ++i) {
    BloomVector I;
    BloomVector Q;
    I.weights.resize(64);
    Q.weights.resize(64);
    for (double& w : I.weights) w = uniform01(rng);
    for (double& w : Q.weights) w = uniform01(rng);
    const double truth = dot(I.weights, Q.weights);
    const double got = relevance(enc_index(I, key, rng), enc_query(Q, key, rng));
    max_rel = std::max(max_rel, std::abs(got - truth) / std::abs(truth));
  }
  c.require(max_rel <= 1e-6, "max relative relevance error " + std::to_string(max_rel));

  BloomVector q;
  q.weights.assign(64, 0.0);
  q.weights[3] = 1.0;
  q.weights[17] = 2.0;
  Trapdoor t1 = enc_query(q, key, rng);
  Trapdoor t2 = enc_query(q, key, rng);
  c.require(encode_trapdoor(t1) != encode_trapdoor(t2),
            "identical queries must yield byte-distinct trapdoors");
}

// ---------------------------------------------------------------- 4
void criterion_anagram_separation(Check& c) {
  c.require(opu_dist("listen", "silent") > 0.0, "opu must separate listen/silent");
  c.equal(unigram_distance("listen", "silent", 20), 0.0, "unigram listen/silent");

  auto pairs = load_anagram_pairs(fixture_path("anagram_pairs.txt"));
  c.require(pairs.size() >= 100, "fixture must hold at least 100 pairs");
  std::size_t checked = 0;
  for (const auto& [word, anagram] : pairs) {
    if (checked == 100) break;
    ++checked;
    if (!(opu_dist(word.c_str(), anagram.c_str()) > 0.0)) {
      c.failures.push_back("opu failed to separate " + word + "/" + anagram);
    }
    if (unigram_distance(word, anagram, 24) != 0.0) {
      c.failures.push_back("unigram unexpectedly separated " + word + "/" + anagram);
    }
  }
  c.equal(checked, static_cast<std::size_t>(100), "pairs checked");
}

// ---------------------------------------------------------------- 5
void criterion_bloom_fp(Check& c) {
  c.equal(minimal_fp_rate(5), 0.03125, "analytic minimum (1/2)^5");
  const double n_opt = 1024.0 * std::log(2.0) / 5.0;
  c.equal(expected_fp_rate(5, n_opt, 1024), 0.03125, "formula value at n l = m ln 2");

  const std::size_t m = 1024;
  const std::size_t l = 5;
  const std::size_t n = 50;
  // Fine buckets put the family in the uniform-hash regime the estimate
  // assumes.
  LshFamily family = generate_family(4242, l, 1e-4, kOpu.dimension(), m);
  std::mt19937_64 gen(31337);
  auto random_word = [&gen]() {
    std::string w;
    const std::size_t len = 6 + uniform_below(gen, 9);
    for (std::size_t i = 0; i < len; ++i) {
      w.push_back(static_cast<char>('a' + uniform_below(gen, 26)));
    }
    return w;
  };
  std::set<std::string> members;
  while (members.size() < n) members.insert(random_word());
  BloomVector filter;
  filter.weights.assign(m, 0.0);
  for (const auto& w : members) {
    for (std::size_t slot : hash_keyword(opu_encode(w, kOpu).weights, family)) {
      filter.weights[slot] = 1.0;
    }
  }
  int fp = 0;
  int probed = 0;
  while (probed < 10000) {
    std::string w = random_word();
    if (members.contains(w)) continue;
    ++probed;
    if (bloom_contains(filter, hash_keyword(opu_encode(w, kOpu).weights, family))) ++fp;
  }
  const double p = expected_fp_rate(l, static_cast<double>(n), m);
  const double sigma = std::sqrt(p * (1.0 - p) / 10000.0);
  const double observed = fp / 10000.0;
  std::ostringstream os;
  os << "empirical fp " << observed << " vs formula " << p << " (3 sigma " << 3 * sigma << ")";
  c.require(std::abs(observed - p) <= 3.0 * sigma, os.str());
}

// ---------------------------------------------------------------- 6
void criterion_cluster_trace(Check& c) {
  ClusterParams params;
  params.seed = 3;
  std::vector<std::vector<double>> pairs{{0.0}, {0.1}, {10.0}, {10.1}};
  KmeansResult r = dynamic_kmeans(pairs, params);
  c.equal(r.centers.size(), static_cast<std::size_t>(2), "two tight pairs end in 2 clusters");
  c.require(r.labels[0] == r.labels[1] && r.labels[2] == r.labels[3] &&
                r.labels[0] != r.labels[2],
            "pairs must stay together");

  std::vector<std::vector<double>> same(5, std::vector<double>{2.0, 2.0});
  KmeansResult one = dynamic_kmeans(same, params);
  c.equal(one.centers.size(), static_cast<std::size_t>(1), "identical points end in 1 cluster");
}

// Shared pipeline pieces for criteria 7-9.
struct Pipeline {
  Corpus corpus;
  TfIdfTable table;
  SecretKey key;
  LshFamily family;
  KeywordEncoder encoder;
  std::vector<std::pair<std::uint64_t, BloomVector>> files;

  Pipeline(const std::string& dir, std::size_t m, std::uint64_t seed)
      : corpus(build_corpus(dir)),
        table(compute_tfidf(corpus.records, corpus.vocabulary)),
        key(keygen(m, seed)) {
    family = generate_family(key.lsh_seed, 20, 4.0, kOpu.dimension(), m);
    encoder = [](const std::string& w) { return opu_encode(w, kOpu).weights; };
    for (const DocumentRecord& rec : corpus.records) {
      std::vector<std::string> stems;
      std::map<std::string, double> weights;
      for (const auto& [stem, count] : rec.keyword_counts) {
        stems.push_back(stem);
        weights[stem] = table.tfidf(stem, rec.doc_id);
      }
      files.emplace_back(rec.doc_id, build_file_bf(stems, weights, family, encoder));
    }
  }

  std::vector<std::string> query_stems(std::uint64_t q, std::size_t len) const {
    std::mt19937_64 rng(derive_seed(1234, q));
    const DocumentRecord& rec = corpus.records[uniform_below(rng, corpus.records.size())];
    std::vector<std::pair<std::string, double>> ranked;
    for (const auto& [stem, count] : rec.keyword_counts) {
      ranked.emplace_back(stem, table.tfidf(stem, rec.doc_id));
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    std::vector<std::string> stems;
    const std::size_t pool = std::min<std::size_t>(ranked.size(), 15);
    std::vector<std::size_t> order(pool);
    for (std::size_t i = 0; i < pool; ++i) order[i] = i;
    for (std::size_t i = pool; i > 1; --i) std::swap(order[i - 1], order[uniform_below(rng, i)]);
    for (std::size_t i = 0; i < std::min(len, pool); ++i) stems.push_back(ranked[order[i]].first);
    return stems;
  }
};

// ---------------------------------------------------------------- 7
void criterion_exact_ranking(Check& c, const std::string& corpus200) {
  ExperimentConfig config;
  config.scheme = Scheme::opu;
  config.bloom_bits = 512;
  config.use_hit = false;
  config.top_k = 20;
  config.query_len = 5;
  config.query_count = 50;
  config.mutation_count = 0;
  config.seed = 20240601;
  ExperimentReport report = run_experiment(config, corpus200);
  c.equal(report.corpus_files, static_cast<std::size_t>(200), "desk corpus size");
  c.equal(report.accuracy, 1.0, "zero-mutation linear accuracy");
}

// ---------------------------------------------------------------- 8
void criterion_hit_efficiency(Check& c, const std::string& corpus500) {
  Pipeline pipe(corpus500, 512, 909090);
  c.equal(pipe.files.size(), static_cast<std::size_t>(500), "desk corpus size");

  ClusterParams cluster;
  cluster.seed = 4040;
  HitTree plain = build_hit(pipe.files, cluster);
  std::mt19937_64 rng(derive_seed(4040, 1));
  HitTree tree = encrypt_tree(plain, pipe.key, rng);
  std::vector<EncryptedIndex> flat;
  for (const auto& [doc, bf] : pipe.files) {
    EncryptedIndex e = enc_index(bf, pipe.key, rng);
    e.node_id = doc;
    flat.push_back(std::move(e));
  }

  double eval_total = 0.0;
  double overlap_total = 0.0;
  const int queries = 50;
  for (int q = 0; q < queries; ++q) {
    auto stems = pipe.query_stems(static_cast<std::uint64_t>(q), 5);
    BloomVector qbf = build_query_bf(stems, pipe.family, pipe.encoder);
    Trapdoor trap = enc_query(qbf, pipe.key, rng);
    SearchResult tree_r = search(tree, trap, 20);
    SearchResult lin_r = linear_search(flat, trap, 20);
    eval_total += static_cast<double>(tree_r.score_evaluations);

    std::vector<std::uint64_t> a;
    std::vector<std::uint64_t> b;
    for (const auto& [doc, s] : tree_r.entries) a.push_back(doc);
    for (const auto& [doc, s] : lin_r.entries) b.push_back(doc);
    overlap_total += topk_overlap_accuracy(a, b, 20);
  }
  const double mean_evals = eval_total / queries;
  const double mean_overlap = overlap_total / queries;
  std::ostringstream os;
  os << "mean evals " << mean_evals << " (budget < 250), overlap " << mean_overlap
     << " (floor 0.6), depth " << tree.depth;
  std::cout << "      " << os.str() << "\n";
  c.require(mean_evals < 0.5 * 500.0, "tree must score fewer than half the corpus: " + os.str());
  c.require(mean_overlap >= 0.6, "tree/linear top-20 overlap too low: " + os.str());
}

// ---------------------------------------------------------------- 9
void criterion_fuzzy_direction(Check& c, const std::string& corpus200) {
  ExperimentConfig base;
  base.bloom_bits = 512;
  base.use_hit = false;
  base.top_k = 20;
  base.query_len = 5;
  base.query_count = 100;
  base.mutation_count = 2;
  base.anagrams_per_query = 1;
  base.anagram_files = 20;
  base.anagram_pairs_path = fixture_path("anagram_pairs.txt");
  base.seed = 20240915;

  ExperimentConfig opu_cfg = base;
  opu_cfg.scheme = Scheme::opu;
  ExperimentConfig uni_cfg = base;
  uni_cfg.scheme = Scheme::unigram;

  ExperimentReport opu_report = run_experiment(opu_cfg, corpus200);
  ExperimentReport uni_report = run_experiment(uni_cfg, corpus200);

  std::ostringstream os;
  os << "misspell opu " << opu_report.accuracy_misspell << " vs unigram "
     << uni_report.accuracy_misspell << "; anagram opu " << opu_report.accuracy_anagram
     << " vs unigram " << uni_report.accuracy_anagram;
  std::cout << "      " << os.str() << "\n";
  c.require(opu_report.accuracy_misspell >= uni_report.accuracy_misspell,
            "misspelling direction violated: " + os.str());
  c.require(opu_report.accuracy_anagram > uni_report.accuracy_anagram,
            "anagram strict direction violated: " + os.str());
}

// ---------------------------------------------------------------- 10
void criterion_verification_soundness(Check& c) {
  std::mt19937_64 gen(60606);
  std::vector<std::pair<std::uint64_t, BloomVector>> files;
  for (std::uint64_t i = 0; i < 6; ++i) {
    BloomVector bf;
    bf.weights.resize(8);
    const double base = static_cast<double>(i % 3) * 6.0;
    for (double& w : bf.weights) w = base + uniform01(gen);
    files.emplace_back(i, std::move(bf));
  }
  ClusterParams params;
  params.seed = 55;
  HitTree plain = build_hit(files, params);
  plain.epoch = 3;
  SecretKey key = keygen(8, 66);
  std::mt19937_64 rng(77);
  HitTree tree = encrypt_tree(plain, key, rng);
  Ed25519Signer signer(88);
  SignatureMap sigs = sign_tree(tree, signer);

  BloomVector q;
  q.weights.assign(8, 0.0);
  q.weights[1] = 1.0;
  Trapdoor trap = enc_query(q, key, rng);
  SearchResult result = search(tree, trap, 2);
  VerificationProof proof = extract_proof(tree, sigs, result);
  std::vector<std::uint8_t> bytes = encode_proof(proof);
  c.require(bytes.size() <= 2048, "proof must stay small: " + std::to_string(bytes.size()));

  Ed25519Verifier verifier(signer.public_key());
  c.require(verify_proof(decode_proof(bytes), verifier).accepted, "untampered proof accepts");

  std::size_t accepted_mutations = 0;
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    std::vector<std::uint8_t> mutated = bytes;
    mutated[i] ^= 0xff;
    try {
      if (verify_proof(decode_proof(mutated), verifier).accepted) ++accepted_mutations;
    } catch (const Error&) {
      // malformed container counts as rejection
    }
  }
  c.equal(accepted_mutations, static_cast<std::size_t>(0), "accepted corrupted proofs");
}

struct Criterion {
  int id;
  const char* title;
  double budget_s;
  std::function<void(Check&)> run;
};

}  // namespace

int main() {
  std::string corpus200 = testsupport::make_temp_dir("acceptance200");
  std::string corpus500 = testsupport::make_temp_dir("acceptance500");
  {
    testsupport::FixtureOptions o200;
    o200.files = 200;
    o200.topics = 12;
    o200.seed = 4242;
    testsupport::generate_desk_corpus(corpus200, o200);
    testsupport::FixtureOptions o500;
    o500.files = 500;
    o500.topics = 20;
    o500.seed = 7777;
    testsupport::generate_desk_corpus(corpus500, o500);
  }

  std::vector<Criterion> criteria = {
      {1, "worked infection example, bit exact", 1.0, criterion_worked_example},
      {2, "similarity table rows", 1.0, criterion_distance_table},
      {3, "encrypted relevance invariance", 10.0, criterion_knn_invariance},
      {4, "anagram separation", 5.0, criterion_anagram_separation},
      {5, "Bloom false-positive model", 30.0, criterion_bloom_fp},
      {6, "dynamic clustering trace", 1.0, criterion_cluster_trace},
      {7, "exact encrypted ranking, linear mode", 120.0,
       [&](Check& c) { criterion_exact_ranking(c, corpus200); }},
      {8, "tree search efficiency and fidelity", 300.0,
       [&](Check& c) { criterion_hit_efficiency(c, corpus500); }},
      {9, "fuzzy accuracy direction vs uni-gram", 600.0,
       [&](Check& c) { criterion_fuzzy_direction(c, corpus200); }},
      {10, "proof soundness under exhaustive corruption", 60.0,
       criterion_verification_soundness},
  };

  int failed = 0;
  for (const Criterion& criterion : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      criterion.run(check);
    } catch (const std::exception& e) {
      check.failures.push_back(std::string("exception: ") + e.what());
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed >= criterion.budget_s) {
      std::ostringstream os;
      os << "runtime " << elapsed << "s exceeded budget " << criterion.budget_s << "s";
      check.failures.push_back(os.str());
    }
    const bool ok = check.failures.empty();
    failed += ok ? 0 : 1;
    std::printf("%s criterion %2d: %s (%.2fs)\n", ok ? "PASS" : "FAIL", criterion.id,
                criterion.title, elapsed);
    for (const std::string& f : check.failures) {
      std::printf("     - %s\n", f.c_str());
    }
  }

  fs::remove_all(corpus200);
  fs::remove_all(corpus500);
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
