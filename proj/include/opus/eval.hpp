#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "opus/corpus.hpp"
#include "opus/opu.hpp"

namespace opus {

enum class Scheme { opu, unigram, bigram };

const char* scheme_name(Scheme scheme);
Scheme scheme_from_name(const std::string& name);

// Ground-truth reference for the accuracy metric.
//  - bloom: plaintext full scan over the same scheme's unencrypted Bloom
//    vectors with the clean query. Zero-mutation linear runs score exactly
//    1.0 against it (the encrypted scan reproduces it term for term).
//  - intended: exact stem-match tf-idf ranking of the clean query. The
//    scheme-independent reference used when schemes are compared against
//    each other; a same-scheme reference would reward coarse encodings
//    that cannot see the mutation at all.
enum class GroundTruth { bloom, intended };

struct ExperimentConfig {
  // Keyword vectorization.
  Scheme scheme = Scheme::opu;
  OpuParams opu;  // letter_blocks also caps the baseline encoders

  // LSH / Bloom.
  std::size_t lsh_functions = 20;  // l
  double bucket_width = 4.0;       // a
  std::size_t bloom_bits = 8000;   // m

  // Clustering and search.
  double tightness = 0.4;  // e
  bool use_hit = false;
  std::size_t top_k = 20;

  // Workload.
  std::size_t query_len = 5;
  std::size_t query_count = 50;
  std::size_t mutation_count = 0;  // misspelled keywords per query
  std::size_t anagrams_per_query = 0;  // N_A
  std::size_t anagram_files = 0;       // F_A
  std::string anagram_pairs_path;

  // Corpus filter.
  std::size_t min_kw = 0;
  std::size_t max_kw = std::numeric_limits<std::size_t>::max();

  GroundTruth ground_truth = GroundTruth::bloom;
  std::uint64_t seed = 1;
};

ExperimentConfig load_experiment_config(const std::string& path);

struct QueryOutcome {
  std::size_t query_index = 0;
  std::string workload;  // "misspell" or "anagram"
  double accuracy = 0.0;
  std::size_t score_evaluations = 0;
  double latency_s = 0.0;
};

struct ExperimentReport {
  std::string scheme;
  std::string search_mode;  // "hit" or "linear"
  double accuracy = 0.0;    // mean over all queries
  double accuracy_misspell = 0.0;
  double accuracy_anagram = 0.0;  // 0 when the anagram workload is off
  std::vector<QueryOutcome> queries;
  double dictionary_build_s = 0.0;
  double filter_build_s = 0.0;
  double query_latency_median_s = 0.0;
  double mean_score_evaluations = 0.0;
  std::size_t corpus_files = 0;
  std::size_t vocabulary_size = 0;
};

// Eq.-style overlap metric: |plain ∩ enc| / k.
double topk_overlap_accuracy(const std::vector<std::uint64_t>& plain_topk,
                             const std::vector<std::uint64_t>& enc_topk, std::size_t k);

enum class MutationOp { replace_letter, adjacent_swap, insert_or_delete };

// One character-level mutation; nullopt when the word cannot support the
// op (too short, or no unequal adjacent pair to swap).
std::optional<std::string> mutate_misspell(const std::string& word, MutationOp op,
                                           std::mt19937_64& rng);

// Baseline encoders. The uni-gram vector records (letter, occurrence
// index) presence plus the digit-and-symbol block; its distance is the
// gram-set symmetric difference. The bi-gram vector records adjacent
// letter pairs tagged with their position; its distance is Euclidean.
std::vector<double> encode_unigram(const std::string& word, std::size_t occurrence_cap);
std::vector<double> encode_bigram(const std::string& word, std::size_t position_cap);
double unigram_distance(const std::string& a, const std::string& b, std::size_t occurrence_cap);
double bigram_distance(const std::string& a, const std::string& b, std::size_t position_cap);

std::size_t unigram_dimension(std::size_t occurrence_cap);
std::size_t bigram_dimension(std::size_t position_cap);

struct AnagramPair {
  std::string word;
  std::string anagram;
};

// One "word anagram" pair per line; '#' starts a comment.
std::vector<AnagramPair> load_anagram_pairs(const std::string& path);

struct AnagramInjection {
  std::uint64_t file_doc_id = 0;
  std::vector<std::string> file_stems;   // members inserted into the file
  std::vector<std::string> query_stems;  // paired members for the query
};

// Inserts one pair member into each of `file_count` distinct documents
// (stem-level, one occurrence each) and records the paired member for the
// matching query. Pairs are consumed without replacement.
std::vector<AnagramInjection> inject_anagrams(std::vector<DocumentRecord>& records,
                                              const std::vector<AnagramPair>& pairs,
                                              std::size_t per_query, std::size_t file_count,
                                              std::mt19937_64& rng);

ExperimentReport run_experiment(const ExperimentConfig& config, const std::string& corpus_dir);

void write_report_json(const ExperimentReport& report, const std::string& path);
void write_report_csv(const ExperimentReport& report, const std::string& path);
std::string format_report_text(const ExperimentReport& report);

}  // namespace opus
