#include "opus/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "opus/error.hpp"
#include "opus/hit.hpp"
#include "opus/lsh_bloom.hpp"
#include "opus/rng.hpp"
#include "opus/secure_knn.hpp"

namespace opus {

const char* scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::opu:
      return "opu";
    case Scheme::unigram:
      return "unigram";
    case Scheme::bigram:
      return "bigram";
  }
  return "unknown";
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "opu") return Scheme::opu;
  if (name == "unigram") return Scheme::unigram;
  if (name == "bigram") return Scheme::bigram;
  throw validation_error("unknown scheme: " + name);
}

double topk_overlap_accuracy(const std::vector<std::uint64_t>& plain_topk,
                             const std::vector<std::uint64_t>& enc_topk, std::size_t k) {
  if (k == 0) throw validation_error("k must be >= 1");
  if (plain_topk.size() > k || enc_topk.size() > k) {
    throw validation_error("top-k sets larger than k");
  }
  std::set<std::uint64_t> plain(plain_topk.begin(), plain_topk.end());
  std::size_t shared = 0;
  std::set<std::uint64_t> seen;
  for (std::uint64_t doc : enc_topk) {
    if (seen.insert(doc).second && plain.contains(doc)) ++shared;
  }
  return static_cast<double>(shared) / static_cast<double>(k);
}

std::optional<std::string> mutate_misspell(const std::string& word, MutationOp op,
                                           std::mt19937_64& rng) {
  if (word.size() < 2) return std::nullopt;
  std::string out = word;
  switch (op) {
    case MutationOp::replace_letter: {
      const std::size_t pos = uniform_below(rng, out.size());
      char replacement;
      do {
        replacement = static_cast<char>('a' + uniform_below(rng, 26));
      } while (replacement == out[pos]);
      out[pos] = replacement;
      return out;
    }
    case MutationOp::adjacent_swap: {
      std::vector<std::size_t> candidates;
      for (std::size_t i = 0; i + 1 < out.size(); ++i) {
        if (out[i] != out[i + 1]) candidates.push_back(i);
      }
      if (candidates.empty()) return std::nullopt;
      const std::size_t i = candidates[uniform_below(rng, candidates.size())];
      std::swap(out[i], out[i + 1]);
      return out;
    }
    case MutationOp::insert_or_delete: {
      if (uniform_below(rng, 2) == 0) {
        const std::size_t pos = uniform_below(rng, out.size() + 1);
        const char letter = static_cast<char>('a' + uniform_below(rng, 26));
        out.insert(out.begin() + static_cast<std::ptrdiff_t>(pos), letter);
      } else {
        const std::size_t pos = uniform_below(rng, out.size());
        out.erase(out.begin() + static_cast<std::ptrdiff_t>(pos));
      }
      return out;
    }
  }
  return std::nullopt;
}

std::size_t unigram_dimension(std::size_t occurrence_cap) { return occurrence_cap * 26 + 30; }

std::size_t bigram_dimension(std::size_t position_cap) {
  return (position_cap - 1) * 26 * 26 + 30;
}

namespace {

int dsb_index(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  const char* p = std::strchr(kDsbSymbols, c);
  if (p != nullptr && *p != '\0') return 10 + static_cast<int>(p - kDsbSymbols);
  return -1;
}

}  // namespace

std::vector<double> encode_unigram(const std::string& word, std::size_t occurrence_cap) {
  if (word.empty()) throw validation_error("empty keyword");
  std::vector<double> v(unigram_dimension(occurrence_cap), 0.0);
  std::array<std::size_t, 26> seen{};
  const std::size_t dsb_base = occurrence_cap * 26;
  for (char ch : word) {
    const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (c >= 'a' && c <= 'z') {
      const std::size_t letter = static_cast<std::size_t>(c - 'a');
      const std::size_t occurrence = seen[letter]++;
      if (occurrence >= occurrence_cap) continue;
      v[occurrence * 26 + letter] = 1.0;
    } else if (int slot = dsb_index(c); slot >= 0) {
      v[dsb_base + static_cast<std::size_t>(slot)] = 1.0;
    }
  }
  return v;
}

std::vector<double> encode_bigram(const std::string& word, std::size_t position_cap) {
  if (word.empty()) throw validation_error("empty keyword");
  std::vector<double> v(bigram_dimension(position_cap), 0.0);
  const std::size_t dsb_base = (position_cap - 1) * 26 * 26;
  std::string letters;
  for (char ch : word) {
    const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (c >= 'a' && c <= 'z') {
      letters.push_back(c);
    } else if (int slot = dsb_index(c); slot >= 0) {
      v[dsb_base + static_cast<std::size_t>(slot)] = 1.0;
    }
  }
  for (std::size_t i = 0; i + 1 < letters.size() && i + 1 < position_cap; ++i) {
    const std::size_t a = static_cast<std::size_t>(letters[i] - 'a');
    const std::size_t b = static_cast<std::size_t>(letters[i + 1] - 'a');
    v[i * 26 * 26 + a * 26 + b] = 1.0;
  }
  return v;
}

double unigram_distance(const std::string& a, const std::string& b, std::size_t occurrence_cap) {
  // Gram-set symmetric difference (the squared Euclidean distance of the
  // presence vectors).
  const auto va = encode_unigram(a, occurrence_cap);
  const auto vb = encode_unigram(b, occurrence_cap);
  double count = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) {
    const double d = va[i] - vb[i];
    count += d * d;
  }
  return count;
}

double bigram_distance(const std::string& a, const std::string& b, std::size_t position_cap) {
  return opu_distance(encode_bigram(a, position_cap), encode_bigram(b, position_cap));
}

std::vector<AnagramPair> load_anagram_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open anagram pairs: " + path);
  std::vector<AnagramPair> pairs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    AnagramPair pair;
    if (!(ls >> pair.word >> pair.anagram)) {
      throw format_error("bad anagram pair line: " + line);
    }
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

std::vector<AnagramInjection> inject_anagrams(std::vector<DocumentRecord>& records,
                                              const std::vector<AnagramPair>& pairs,
                                              std::size_t per_query, std::size_t file_count,
                                              std::mt19937_64& rng) {
  if (per_query == 0 || file_count == 0) return {};
  if (pairs.empty()) throw validation_error("anagram pair list is empty");
  if (file_count > records.size()) throw validation_error("more anagram files than documents");
  if (per_query * file_count > pairs.size()) {
    throw validation_error("not enough anagram pairs for the requested workload");
  }

  // Choose distinct files and consume pairs without replacement.
  std::vector<std::size_t> file_order(records.size());
  for (std::size_t i = 0; i < file_order.size(); ++i) file_order[i] = i;
  for (std::size_t i = file_order.size(); i > 1; --i) {
    std::swap(file_order[i - 1], file_order[uniform_below(rng, i)]);
  }
  std::vector<std::size_t> pair_order(pairs.size());
  for (std::size_t i = 0; i < pair_order.size(); ++i) pair_order[i] = i;
  for (std::size_t i = pair_order.size(); i > 1; --i) {
    std::swap(pair_order[i - 1], pair_order[uniform_below(rng, i)]);
  }

  std::vector<AnagramInjection> injections;
  std::size_t next_pair = 0;
  for (std::size_t f = 0; f < file_count; ++f) {
    DocumentRecord& rec = records[file_order[f]];
    AnagramInjection injection;
    injection.file_doc_id = rec.doc_id;
    for (std::size_t j = 0; j < per_query; ++j) {
      const AnagramPair& pair = pairs[pair_order[next_pair++]];
      // Stem level on purpose: stemming one member and not the other could
      // destroy the letter-multiset relation the workload measures.
      rec.stemmed_keywords.push_back(pair.word);
      ++rec.keyword_counts[pair.word];
      injection.file_stems.push_back(pair.word);
      injection.query_stems.push_back(pair.anagram);
    }
    injections.push_back(std::move(injection));
  }
  return injections;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

KeywordEncoder make_encoder(const ExperimentConfig& config) {
  switch (config.scheme) {
    case Scheme::opu:
      return [params = config.opu](const std::string& w) { return opu_encode(w, params).weights; };
    case Scheme::unigram:
      return [cap = config.opu.letter_blocks](const std::string& w) {
        return encode_unigram(w, cap);
      };
    case Scheme::bigram:
      return [cap = config.opu.letter_blocks](const std::string& w) {
        return encode_bigram(w, cap);
      };
  }
  throw validation_error("unknown scheme");
}

std::size_t encoder_dimension(const ExperimentConfig& config) {
  switch (config.scheme) {
    case Scheme::opu:
      return config.opu.dimension();
    case Scheme::unigram:
      return unigram_dimension(config.opu.letter_blocks);
    case Scheme::bigram:
      return bigram_dimension(config.opu.letter_blocks);
  }
  throw validation_error("unknown scheme");
}

// Exact stem-match reference: a keyword credits only files literally
// containing it, weighted by tf-idf.
std::vector<std::uint64_t> intended_topk(const std::vector<DocumentRecord>& records,
                                         const TfIdfTable& table,
                                         const std::vector<std::string>& query, std::size_t k) {
  std::vector<std::pair<std::uint64_t, double>> scored;
  scored.reserve(records.size());
  for (const DocumentRecord& rec : records) {
    double score = 0.0;
    for (const std::string& q : query) {
      if (rec.keyword_counts.contains(q)) score += table.tfidf(q, rec.doc_id);
    }
    scored.emplace_back(rec.doc_id, score);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::uint64_t> ids;
  for (std::size_t i = 0; i < std::min(k, scored.size()); ++i) ids.push_back(scored[i].first);
  return ids;
}

std::vector<std::uint64_t> plain_topk(const std::vector<std::pair<std::uint64_t, BloomVector>>& files,
                                      const BloomVector& query, std::size_t k) {
  std::vector<std::pair<std::uint64_t, double>> scored;
  scored.reserve(files.size());
  for (const auto& [doc_id, bf] : files) {
    scored.emplace_back(doc_id, dot(bf.weights, query.weights));
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::uint64_t> ids;
  for (std::size_t i = 0; i < std::min(k, scored.size()); ++i) ids.push_back(scored[i].first);
  return ids;
}

// Query keywords come from the target document's highest tf-idf stems. A
// nonzero df_floor keeps near-singleton stems out, for workloads whose
// ground-truth ranking needs at least top-k files with matching keywords.
std::vector<std::string> draw_query_stems(const DocumentRecord& rec, const TfIdfTable& table,
                                          std::size_t want, std::mt19937_64& rng,
                                          const Vocabulary* vocab = nullptr,
                                          std::uint64_t df_floor = 0) {
  std::vector<std::pair<std::string, double>> weighted;
  for (const auto& [stem, count] : rec.keyword_counts) {
    if (df_floor > 0 && vocab != nullptr) {
      auto it = vocab->doc_frequency.find(stem);
      if (it == vocab->doc_frequency.end() || it->second < df_floor) continue;
    }
    weighted.emplace_back(stem, table.tfidf(stem, rec.doc_id));
  }
  std::sort(weighted.begin(), weighted.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  const std::size_t pool = std::min(weighted.size(), std::max<std::size_t>(3 * want, 15));
  std::vector<std::size_t> order(pool);
  for (std::size_t i = 0; i < pool; ++i) order[i] = i;
  for (std::size_t i = pool; i > 1; --i) {
    std::swap(order[i - 1], order[uniform_below(rng, i)]);
  }
  std::vector<std::string> stems;
  for (std::size_t i = 0; i < std::min(want, pool); ++i) {
    stems.push_back(weighted[order[i]].first);
  }
  return stems;
}

std::string apply_mutations(std::vector<std::string>& stems, std::size_t count,
                            std::mt19937_64& rng) {
  std::string notes;
  if (count == 0 || stems.empty()) return notes;
  std::vector<std::size_t> order(stems.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[uniform_below(rng, i)]);
  }
  const std::size_t n = std::min(count, stems.size());
  for (std::size_t i = 0; i < n; ++i) {
    std::string& word = stems[order[i]];
    std::optional<std::string> mutated;
    for (int attempt = 0; attempt < 8 && !mutated; ++attempt) {
      const auto op = static_cast<MutationOp>(uniform_below(rng, 3));
      mutated = mutate_misspell(word, op, rng);
    }
    if (mutated) {
      word = *mutated;
    } else {
      notes += "unmutable keyword: " + word + "; ";
    }
  }
  return notes;
}

struct EncryptedCorpus {
  // Exactly one of the two is populated, depending on the search mode.
  HitTree tree;
  std::vector<EncryptedIndex> flat;
};

EncryptedCorpus encrypt_corpus(const std::vector<std::pair<std::uint64_t, BloomVector>>& files,
                               const ExperimentConfig& config, const SecretKey& key,
                               std::mt19937_64& rng) {
  EncryptedCorpus out;
  if (config.use_hit) {
    ClusterParams cluster;
    cluster.tightness = config.tightness;
    cluster.seed = derive_seed(config.seed, 0x7e11);
    HitTree plain_tree = build_hit(files, cluster);
    out.tree = encrypt_tree(plain_tree, key, rng);
  } else {
    out.flat.reserve(files.size());
    for (const auto& [doc_id, bf] : files) {
      EncryptedIndex enc = enc_index(bf, key, rng);
      enc.node_id = doc_id;
      out.flat.push_back(std::move(enc));
    }
  }
  return out;
}

SearchResult run_search(const EncryptedCorpus& corpus, const ExperimentConfig& config,
                        const Trapdoor& trapdoor) {
  if (config.use_hit) return search(corpus.tree, trapdoor, config.top_k);
  return linear_search(corpus.flat, trapdoor, config.top_k);
}

std::vector<std::uint64_t> result_ids(const SearchResult& result) {
  std::vector<std::uint64_t> ids;
  ids.reserve(result.entries.size());
  for (const auto& [doc_id, score] : result.entries) ids.push_back(doc_id);
  return ids;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config, const std::string& corpus_dir) {
  ExperimentReport report;
  report.scheme = scheme_name(config.scheme);
  report.search_mode = config.use_hit ? "hit" : "linear";

  auto t0 = Clock::now();
  Corpus corpus = build_corpus(corpus_dir, config.min_kw, config.max_kw);
  TfIdfTable table = compute_tfidf(corpus.records, corpus.vocabulary);
  report.dictionary_build_s = seconds_since(t0);
  report.corpus_files = corpus.records.size();
  report.vocabulary_size = corpus.vocabulary.stems.size();

  const KeywordEncoder encoder = make_encoder(config);
  const std::size_t dim = encoder_dimension(config);
  SecretKey key = keygen(config.bloom_bits, derive_seed(config.seed, 0x4e4));
  LshFamily family =
      generate_family(key.lsh_seed, config.lsh_functions, config.bucket_width, dim,
                      config.bloom_bits);

  auto build_file_vectors = [&](const std::vector<DocumentRecord>& records,
                                const TfIdfTable& weights) {
    std::vector<std::pair<std::uint64_t, BloomVector>> files;
    files.reserve(records.size());
    for (const DocumentRecord& rec : records) {
      std::vector<std::string> stems;
      std::map<std::string, double> stem_weights;
      for (const auto& [stem, count] : rec.keyword_counts) {
        stems.push_back(stem);
        stem_weights[stem] = weights.tfidf(stem, rec.doc_id);
      }
      files.emplace_back(rec.doc_id, build_file_bf(stems, stem_weights, family, encoder));
    }
    return files;
  };

  t0 = Clock::now();
  const auto base_files = build_file_vectors(corpus.records, table);
  report.filter_build_s = seconds_since(t0);

  std::mt19937_64 enc_rng(derive_seed(config.seed, 0xe6c));
  const EncryptedCorpus base_index = encrypt_corpus(base_files, config, key, enc_rng);

  std::vector<double> latencies;

  // Misspelling workload (mutation_count == 0 gives the clean baseline).
  if (config.query_count > 0) {
    // Warmup, excluded from timing.
    {
      std::mt19937_64 rng(derive_seed(config.seed, 0xfade));
      const DocumentRecord& rec = corpus.records[uniform_below(rng, corpus.records.size())];
      auto stems = draw_query_stems(rec, table, config.query_len, rng);
      if (!stems.empty()) {
        BloomVector qbf = build_query_bf(stems, family, encoder);
        Trapdoor trap = enc_query(qbf, key, rng);
        (void)run_search(base_index, config, trap);
        (void)run_search(base_index, config, trap);
      }
    }
    // The intended-match reference needs clean keywords that literally
    // occur in enough documents to fill the top k.
    const std::uint64_t df_floor =
        config.ground_truth == GroundTruth::intended
            ? std::max<std::uint64_t>(5, corpus.records.size() / 25)
            : 0;
    for (std::size_t q = 0; q < config.query_count; ++q) {
      std::mt19937_64 rng(derive_seed(config.seed, 0xa000 + q));
      const DocumentRecord& rec = corpus.records[uniform_below(rng, corpus.records.size())];
      std::vector<std::string> clean = draw_query_stems(rec, table, config.query_len, rng,
                                                        &corpus.vocabulary, df_floor);
      if (clean.empty()) continue;
      std::vector<std::string> issued = clean;
      apply_mutations(issued, config.mutation_count, rng);

      const auto truth =
          config.ground_truth == GroundTruth::intended
              ? intended_topk(corpus.records, table, clean, config.top_k)
              : plain_topk(base_files, build_query_bf(clean, family, encoder), config.top_k);
      Trapdoor trap = enc_query(build_query_bf(issued, family, encoder), key, rng);
      auto ts = Clock::now();
      SearchResult result = run_search(base_index, config, trap);
      const double latency = seconds_since(ts);
      latencies.push_back(latency);

      QueryOutcome outcome;
      outcome.query_index = q;
      outcome.workload = "misspell";
      outcome.accuracy = topk_overlap_accuracy(truth, result_ids(result), config.top_k);
      outcome.score_evaluations = result.score_evaluations;
      outcome.latency_s = latency;
      report.queries.push_back(outcome);
    }
  }

  // Anagram workload: pollute F_A files with pair members, query with the
  // partners. Ground truth is the intended-match ranking recorded at
  // injection time: a keyword matches only files that literally contain
  // it, so credit gained through anagram confusion counts against the
  // scheme. (The Bloom-level ground truth used above would inherit the
  // confusion and blind the comparison.)
  if (config.anagrams_per_query > 0 && config.anagram_files > 0) {
    if (config.anagram_pairs_path.empty()) {
      throw validation_error("anagram workload requires anagram_pairs_path");
    }
    const auto pairs = load_anagram_pairs(config.anagram_pairs_path);
    std::vector<DocumentRecord> polluted = corpus.records;
    std::mt19937_64 rng_inject(derive_seed(config.seed, 0x1a9));
    const auto injections = inject_anagrams(polluted, pairs, config.anagrams_per_query,
                                            config.anagram_files, rng_inject);
    Vocabulary vocab2 = build_vocabulary(polluted);
    TfIdfTable table2 = compute_tfidf(polluted, vocab2);
    const auto polluted_files = build_file_vectors(polluted, table2);
    std::mt19937_64 enc_rng2(derive_seed(config.seed, 0xe6c2));
    const EncryptedCorpus polluted_index = encrypt_corpus(polluted_files, config, key, enc_rng2);


    for (std::size_t j = 0; j < injections.size(); ++j) {
      std::mt19937_64 rng(derive_seed(config.seed, 0xb000 + j));
      // Background keywords come from a file other than the polluted one:
      // the anagram member is then the only tie between query and target.
      std::size_t other;
      do {
        other = uniform_below(rng, corpus.records.size());
      } while (corpus.records[other].doc_id == injections[j].file_doc_id &&
               corpus.records.size() > 1);
      const std::size_t background =
          config.query_len > config.anagrams_per_query
              ? config.query_len - config.anagrams_per_query
              : 0;
      // df floor: the intended-match ranking needs at least top_k files
      // with literal keyword hits, or its tail is arbitrary.
      const std::uint64_t df_floor =
          std::max<std::uint64_t>(5, corpus.records.size() / 25);
      std::vector<std::string> issued = draw_query_stems(corpus.records[other], table,
                                                         background, rng, &corpus.vocabulary,
                                                         df_floor);
      for (const std::string& stem : injections[j].query_stems) issued.push_back(stem);
      if (issued.empty()) continue;

      const auto truth = intended_topk(polluted, table2, issued, config.top_k);
      Trapdoor trap = enc_query(build_query_bf(issued, family, encoder), key, rng);
      auto ts = Clock::now();
      SearchResult result = run_search(polluted_index, config, trap);
      const double latency = seconds_since(ts);
      latencies.push_back(latency);

      QueryOutcome outcome;
      outcome.query_index = config.query_count + j;
      outcome.workload = "anagram";
      outcome.accuracy = topk_overlap_accuracy(truth, result_ids(result), config.top_k);
      outcome.score_evaluations = result.score_evaluations;
      outcome.latency_s = latency;
      report.queries.push_back(outcome);
    }
  }

  double total = 0.0;
  double total_misspell = 0.0;
  double total_anagram = 0.0;
  std::size_t n_misspell = 0;
  std::size_t n_anagram = 0;
  double evals = 0.0;
  for (const QueryOutcome& q : report.queries) {
    total += q.accuracy;
    evals += static_cast<double>(q.score_evaluations);
    if (q.workload == "misspell") {
      total_misspell += q.accuracy;
      ++n_misspell;
    } else {
      total_anagram += q.accuracy;
      ++n_anagram;
    }
  }
  const std::size_t n = report.queries.size();
  report.accuracy = n > 0 ? total / static_cast<double>(n) : 0.0;
  report.accuracy_misspell = n_misspell > 0 ? total_misspell / static_cast<double>(n_misspell) : 0.0;
  report.accuracy_anagram = n_anagram > 0 ? total_anagram / static_cast<double>(n_anagram) : 0.0;
  report.mean_score_evaluations = n > 0 ? evals / static_cast<double>(n) : 0.0;
  report.query_latency_median_s = median(latencies);
  return report;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw format_error("bad config JSON: " + std::string(e.what()));
  }
  ExperimentConfig config;
  if (j.contains("scheme")) config.scheme = scheme_from_name(j["scheme"].get<std::string>());
  if (j.contains("letter_blocks")) config.opu.letter_blocks = j["letter_blocks"].get<std::size_t>();
  if (j.contains("strength")) config.opu.strength = j["strength"].get<double>();
  if (j.contains("spread")) config.opu.spread = j["spread"].get<std::size_t>();
  if (j.contains("lsh_functions")) config.lsh_functions = j["lsh_functions"].get<std::size_t>();
  if (j.contains("bucket_width")) config.bucket_width = j["bucket_width"].get<double>();
  if (j.contains("bloom_bits")) config.bloom_bits = j["bloom_bits"].get<std::size_t>();
  if (j.contains("tightness")) config.tightness = j["tightness"].get<double>();
  if (j.contains("use_hit")) config.use_hit = j["use_hit"].get<bool>();
  if (j.contains("top_k")) config.top_k = j["top_k"].get<std::size_t>();
  if (j.contains("query_len")) config.query_len = j["query_len"].get<std::size_t>();
  if (j.contains("query_count")) config.query_count = j["query_count"].get<std::size_t>();
  if (j.contains("mutation_count")) config.mutation_count = j["mutation_count"].get<std::size_t>();
  if (j.contains("anagrams_per_query")) {
    config.anagrams_per_query = j["anagrams_per_query"].get<std::size_t>();
  }
  if (j.contains("anagram_files")) config.anagram_files = j["anagram_files"].get<std::size_t>();
  if (j.contains("anagram_pairs_path")) {
    config.anagram_pairs_path = j["anagram_pairs_path"].get<std::string>();
  }
  if (j.contains("ground_truth")) {
    const std::string gt = j["ground_truth"].get<std::string>();
    if (gt == "bloom") {
      config.ground_truth = GroundTruth::bloom;
    } else if (gt == "intended") {
      config.ground_truth = GroundTruth::intended;
    } else {
      throw validation_error("unknown ground_truth: " + gt);
    }
  }
  if (j.contains("min_kw")) config.min_kw = j["min_kw"].get<std::size_t>();
  if (j.contains("max_kw")) config.max_kw = j["max_kw"].get<std::size_t>();
  if (j.contains("seed")) config.seed = j["seed"].get<std::uint64_t>();
  return config;
}

namespace {

nlohmann::json report_to_json(const ExperimentReport& report) {
  nlohmann::json j;
  j["scheme"] = report.scheme;
  j["search_mode"] = report.search_mode;
  j["accuracy"] = report.accuracy;
  j["accuracy_misspell"] = report.accuracy_misspell;
  j["accuracy_anagram"] = report.accuracy_anagram;
  j["dictionary_build_s"] = report.dictionary_build_s;
  j["filter_build_s"] = report.filter_build_s;
  j["query_latency_median_s"] = report.query_latency_median_s;
  j["mean_score_evaluations"] = report.mean_score_evaluations;
  j["corpus_files"] = report.corpus_files;
  j["vocabulary_size"] = report.vocabulary_size;
  nlohmann::json queries = nlohmann::json::array();
  for (const QueryOutcome& q : report.queries) {
    queries.push_back({{"query", q.query_index},
                       {"workload", q.workload},
                       {"accuracy", q.accuracy},
                       {"score_evaluations", q.score_evaluations},
                       {"latency_s", q.latency_s}});
  }
  j["queries"] = std::move(queries);
  return j;
}

}  // namespace

void write_report_json(const ExperimentReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write report: " + path);
  out << report_to_json(report).dump(2) << "\n";
  if (!out) throw io_error("write failed: " + path);
}

void write_report_csv(const ExperimentReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write csv: " + path);
  out << "query,workload,accuracy,score_evaluations,latency_s\n";
  for (const QueryOutcome& q : report.queries) {
    out << q.query_index << "," << q.workload << "," << q.accuracy << ","
        << q.score_evaluations << "," << q.latency_s << "\n";
  }
  if (!out) throw io_error("write failed: " + path);
}

std::string format_report_text(const ExperimentReport& report) {
  std::ostringstream out;
  out << "scheme=" << report.scheme << " mode=" << report.search_mode << "\n";
  out << "files=" << report.corpus_files << " vocabulary=" << report.vocabulary_size << "\n";
  out << "accuracy=" << report.accuracy;
  out << " (misspell=" << report.accuracy_misspell;
  out << ", anagram=" << report.accuracy_anagram << ")\n";
  out << "dictionary_build_s=" << report.dictionary_build_s
      << " filter_build_s=" << report.filter_build_s
      << " query_latency_median_s=" << report.query_latency_median_s << "\n";
  out << "mean_score_evaluations=" << report.mean_score_evaluations << "\n";
  return out.str();
}

}  // namespace opus
