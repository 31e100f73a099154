#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>

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

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitEmptyInput = 3;
constexpr int kExitDimension = 4;
constexpr int kExitVerifyReject = 5;
constexpr int kExitMalformed = 6;

int exit_code_for(const opus::Error& e) {
  switch (e.kind()) {
    case opus::ErrorKind::empty_input:
      return kExitEmptyInput;
    case opus::ErrorKind::dimension:
      return kExitDimension;
    case opus::ErrorKind::format:
      return kExitMalformed;
    case opus::ErrorKind::io:
    case opus::ErrorKind::validation:
    case opus::ErrorKind::consistency:
      return kExitUsage;
  }
  return kExitUsage;
}

std::uint64_t resolve_seed(bool seed_given, std::uint64_t seed) {
  if (seed_given) return seed;
  std::random_device rd;
  std::uint64_t fresh = (static_cast<std::uint64_t>(rd()) << 32) | rd();
  std::cout << "seed: " << fresh << " (record it to reproduce this run)\n";
  return fresh;
}

// Shared vectorization flags; index and query must agree on them.
struct PipelineParams {
  std::size_t letter_blocks = 20;
  double strength = 2.0;
  std::size_t spread = 2;
  std::size_t lsh_functions = 20;
  double bucket_width = 4.0;

  opus::OpuParams opu() const { return {letter_blocks, strength, spread}; }

  void add_flags(CLI::App* cmd) {
    cmd->add_option("--letter-blocks", letter_blocks, "Keyword positions represented")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--strength", strength, "Infection decay base (> 1)");
    cmd->add_option("--spread", spread, "Infection reach in letter blocks");
    cmd->add_option("--lsh-functions", lsh_functions, "LSH functions per Bloom filter")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--bucket-width", bucket_width, "LSH bucket width")
        ->check(CLI::PositiveNumber);
  }
};

opus::KeywordEncoder opu_encoder(const opus::OpuParams& params) {
  return [params](const std::string& w) { return opus::opu_encode(w, params).weights; };
}

int cmd_keygen(std::size_t dim, bool seed_given, std::uint64_t seed, const std::string& out) {
  if (dim >= 4096) {
    std::cerr << "note: dim " << dim << " stores two " << dim << "x" << dim
              << " matrices (" << (2.0 * dim * dim * 8.0 / (1 << 20)) << " MiB)\n";
  }
  const std::uint64_t use_seed = resolve_seed(seed_given, seed);
  opus::SecretKey key = opus::keygen(dim, use_seed);
  opus::write_key(key, out);
  std::cout << "wrote " << out << " (m=" << dim << ")\n";
  return 0;
}

struct IndexArgs {
  std::string corpus_dir;
  std::string key_path;
  std::string out;
  std::string manifest;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::uint64_t epoch = 1;
  std::size_t min_kw = 0;
  std::size_t max_kw = std::numeric_limits<std::size_t>::max();
  double tightness = 0.4;
  PipelineParams pipeline;
  bool verbose = false;
};

int cmd_index(const IndexArgs& args) {
  const std::uint64_t seed = resolve_seed(args.seed_given, args.seed);
  opus::SecretKey key = opus::read_key(args.key_path);

  opus::Corpus corpus = opus::build_corpus(args.corpus_dir, args.min_kw, args.max_kw);
  opus::TfIdfTable table = opus::compute_tfidf(corpus.records, corpus.vocabulary);
  const std::string manifest =
      args.manifest.empty() ? args.out + ".corpus" : args.manifest;
  opus::write_corpus_manifest(corpus, manifest);
  if (args.verbose) {
    std::cerr << "corpus: " << corpus.records.size() << " files, "
              << corpus.vocabulary.stems.size() << " stems\n";
  }

  const opus::OpuParams opu_params = args.pipeline.opu();
  opus::LshFamily family =
      opus::generate_family(key.lsh_seed, args.pipeline.lsh_functions,
                            args.pipeline.bucket_width, opu_params.dimension(), key.m);
  const opus::KeywordEncoder encoder = opu_encoder(opu_params);

  std::vector<std::pair<std::uint64_t, opus::BloomVector>> files;
  files.reserve(corpus.records.size());
  for (const opus::DocumentRecord& rec : corpus.records) {
    std::vector<std::string> stems;
    std::map<std::string, double> weights;
    for (const auto& [stem, count] : rec.keyword_counts) {
      stems.push_back(stem);
      weights[stem] = table.tfidf(stem, rec.doc_id);
    }
    files.emplace_back(rec.doc_id, opus::build_file_bf(stems, weights, family, encoder));
  }

  opus::ClusterParams cluster;
  cluster.tightness = args.tightness;
  cluster.seed = opus::derive_seed(seed, 0x7e11);
  opus::HitTree plain_tree = opus::build_hit(files, cluster);
  plain_tree.epoch = args.epoch;

  // Encryption randomness is always fresh: repeated runs share topology
  // (same seed) but never ciphertext bytes.
  std::random_device rd;
  std::mt19937_64 enc_rng((static_cast<std::uint64_t>(rd()) << 32) | rd());
  opus::HitTree enc = opus::encrypt_tree(plain_tree, key, enc_rng);

  opus::Ed25519Signer signer(opus::derive_seed(seed, 0x516e));
  opus::SignedIndex index{std::move(enc), {}};
  index.signatures = opus::sign_tree(index.tree, signer);
  opus::write_index(index, args.out);
  opus::write_public_key(signer.public_key(), args.out + ".pub");

  std::cout << "wrote " << args.out << " (" << index.tree.leaf_count << " leaves, depth "
            << index.tree.depth << "), " << args.out << ".pub, " << manifest << "\n";
  return 0;
}

int cmd_query(const std::string& keywords, const std::string& key_path, const std::string& out,
              const PipelineParams& pipeline) {
  std::vector<std::string> stems;
  for (const std::string& token :
       opus::tokenize_and_filter(keywords, {}, "<command line>")) {
    stems.push_back(opus::stem(token));
  }
  if (stems.empty()) throw opus::empty_input_error("no usable keywords in query");

  opus::SecretKey key = opus::read_key(key_path);
  const opus::OpuParams opu_params = pipeline.opu();
  opus::LshFamily family =
      opus::generate_family(key.lsh_seed, pipeline.lsh_functions, pipeline.bucket_width,
                            opu_params.dimension(), key.m);
  opus::BloomVector query_bf =
      opus::build_query_bf(stems, family, opu_encoder(opu_params));

  std::random_device rd;
  std::mt19937_64 rng((static_cast<std::uint64_t>(rd()) << 32) | rd());
  opus::Trapdoor trap = opus::enc_query(query_bf, key, rng);
  opus::write_trapdoor(trap, out);
  std::cout << "wrote " << out << " (" << stems.size() << " keywords)\n";
  return 0;
}

int cmd_search(const std::string& index_path, const std::string& trapdoor_path, std::size_t k,
               bool linear, std::string proof_path) {
  opus::SignedIndex index = opus::read_index(index_path);
  opus::Trapdoor trap = opus::read_trapdoor(trapdoor_path);
  if (static_cast<std::size_t>(trap.part1.size()) != index.tree.dimension) {
    throw opus::dimension_error("trapdoor dimension " + std::to_string(trap.part1.size()) +
                                " does not match index dimension " +
                                std::to_string(index.tree.dimension));
  }

  opus::SearchResult result;
  if (linear) {
    std::vector<opus::EncryptedIndex> leaves;
    for (const opus::HitNode& node : index.tree.nodes) {
      if (!node.is_leaf()) continue;
      opus::EncryptedIndex enc = *node.center_enc;
      enc.node_id = *node.doc_id;
      leaves.push_back(std::move(enc));
    }
    result = opus::linear_search(leaves, trap, k);
  } else {
    result = opus::search(index.tree, trap, k);
  }

  for (const auto& [doc_id, score] : result.entries) {
    std::cout << "doc " << doc_id << " score " << score << "\n";
  }
  std::cout << "score_evaluations " << result.score_evaluations << "\n";
  if (result.short_result) {
    std::cout << "short-result: index holds only " << index.tree.leaf_count << " files\n";
  }

  if (proof_path.empty()) proof_path = index_path + ".proof";
  opus::VerificationProof proof = opus::extract_proof(index.tree, index.signatures, result);
  opus::write_proof(proof, proof_path);
  std::cout << "wrote " << proof_path << "\n";
  return 0;
}

int cmd_verify(const std::string& proof_path, const std::string& pubkey_path) {
  opus::VerificationProof proof;
  std::array<std::uint8_t, 32> pubkey{};
  try {
    proof = opus::read_proof(proof_path);
    pubkey = opus::read_public_key(pubkey_path);
  } catch (const opus::Error& e) {
    std::cerr << "malformed input: " << e.what() << "\n";
    return kExitMalformed;
  }
  opus::Ed25519Verifier verifier(pubkey);
  opus::VerifyOutcome outcome;
  try {
    outcome = opus::verify_proof(proof, verifier);
  } catch (const opus::Error& e) {
    std::cerr << "malformed proof: " << e.what() << "\n";
    return kExitMalformed;
  }
  if (!outcome.accepted) {
    std::cout << "reject: " << opus::reject_reason_name(outcome.reason) << " (" << outcome.detail
              << ")\n";
    return kExitVerifyReject;
  }
  std::cout << "accept\n";
  return 0;
}

int cmd_eval(const std::string& corpus_dir, const std::string& config_path,
             const std::string& out, const std::string& csv, bool seed_given,
             std::uint64_t seed) {
  opus::ExperimentConfig config = opus::load_experiment_config(config_path);
  if (seed_given) config.seed = seed;
  opus::ExperimentReport report = opus::run_experiment(config, corpus_dir);
  opus::write_report_json(report, out);
  if (!csv.empty()) opus::write_report_csv(report, csv);
  std::cout << opus::format_report_text(report);
  std::cout << "wrote " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-keyword fuzzy search over encrypted data"};
  app.require_subcommand(1);

  // keygen
  auto* keygen = app.add_subcommand("keygen", "Generate secret key material");
  std::size_t kg_dim = 256;
  std::uint64_t kg_seed = 0;
  std::string kg_out;
  keygen->add_option("--dim", kg_dim, "Bloom filter length m")->required()->check(CLI::Range(2u, 1u << 20));
  auto* kg_seed_opt = keygen->add_option("--seed", kg_seed, "Key seed");
  keygen->add_option("--out", kg_out, "Output key file")->required();

  // index
  auto* index = app.add_subcommand("index", "Build, encrypt and sign a file index");
  IndexArgs ia;
  index->add_option("--corpus", ia.corpus_dir, "Directory of plain-text files")->required();
  index->add_option("--key", ia.key_path, "Key file")->required();
  index->add_option("--out", ia.out, "Output index file")->required();
  index->add_option("--manifest", ia.manifest, "Corpus manifest path");
  auto* ia_seed_opt = index->add_option("--seed", ia.seed, "Clustering/signing seed");
  index->add_option("--epoch", ia.epoch, "Epoch embedded in the signed root");
  index->add_option("--min-kw", ia.min_kw, "Minimum distinct stems per retained file");
  index->add_option("--max-kw", ia.max_kw, "Maximum distinct stems per retained file");
  index->add_option("--tightness", ia.tightness, "Cluster tightness factor e");
  index->add_flag("--verbose", ia.verbose, "Progress to stderr");
  ia.pipeline.add_flags(index);

  // query
  auto* query = app.add_subcommand("query", "Build an encrypted trapdoor");
  std::string q_keywords;
  std::string q_key;
  std::string q_out;
  PipelineParams q_pipeline;
  query->add_option("--keywords", q_keywords, "Space-separated keywords")->required();
  query->add_option("--key", q_key, "Key file")->required();
  query->add_option("--out", q_out, "Output trapdoor file")->required();
  q_pipeline.add_flags(query);

  // search
  auto* search = app.add_subcommand("search", "Rank files against a trapdoor");
  std::string s_index;
  std::string s_trap;
  std::size_t s_k = 20;
  bool s_linear = false;
  std::string s_proof;
  search->add_option("--index", s_index, "Index file")->required();
  search->add_option("--trapdoor", s_trap, "Trapdoor file")->required();
  search->add_option("-k,--top-k", s_k, "Files to return")->check(CLI::PositiveNumber);
  search->add_flag("--linear", s_linear, "Scan every file instead of the tree");
  search->add_option("--proof", s_proof, "Proof output path (default <index>.proof)");

  // verify
  auto* verify = app.add_subcommand("verify", "Check a search proof");
  std::string v_proof;
  std::string v_pub;
  verify->add_option("--proof", v_proof, "Proof file")->required();
  verify->add_option("--pubkey", v_pub, "Owner public key file")->required();

  // eval
  auto* eval = app.add_subcommand("eval", "Run an accuracy/efficiency experiment");
  std::string e_corpus;
  std::string e_config;
  std::string e_out;
  std::string e_csv;
  std::uint64_t e_seed = 0;
  eval->add_option("--corpus", e_corpus, "Directory of plain-text files")->required();
  eval->add_option("--config", e_config, "Experiment config JSON")->required();
  eval->add_option("--out", e_out, "Report JSON output")->required();
  eval->add_option("--csv", e_csv, "Optional per-query CSV output");
  auto* e_seed_opt = eval->add_option("--seed", e_seed, "Override the config seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (keygen->parsed()) {
      return cmd_keygen(kg_dim, kg_seed_opt->count() > 0, kg_seed, kg_out);
    }
    if (index->parsed()) {
      ia.seed_given = ia_seed_opt->count() > 0;
      return cmd_index(ia);
    }
    if (query->parsed()) return cmd_query(q_keywords, q_key, q_out, q_pipeline);
    if (search->parsed()) return cmd_search(s_index, s_trap, s_k, s_linear, s_proof);
    if (verify->parsed()) return cmd_verify(v_proof, v_pub);
    if (eval->parsed()) {
      return cmd_eval(e_corpus, e_config, e_out, e_csv, e_seed_opt->count() > 0, e_seed);
    }
  } catch (const opus::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
