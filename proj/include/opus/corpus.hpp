#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace opus {

struct DocumentRecord {
  std::uint64_t doc_id = 0;
  std::string source_path;
  std::vector<std::string> raw_keywords;      // filtered tokens, document order
  std::vector<std::string> stemmed_keywords;  // stemmed, stopword-free, document order
  std::map<std::string, std::uint64_t> keyword_counts;  // stem -> occurrences
};

struct Vocabulary {
  std::vector<std::string> stems;                       // distinct, sorted
  std::map<std::string, std::uint64_t> doc_frequency;   // stem -> #documents containing it
};

// Ratio-form IDF: idf = |F| / doc_frequency, no logarithm. Per-document
// term frequencies sum to 1.
struct TfIdfTable {
  std::vector<std::map<std::string, double>> tf;  // indexed by doc_id
  std::map<std::string, double> idf;

  double tfidf(const std::string& stem, std::uint64_t doc_id) const;
  // Stems of one document with their tf-idf weights.
  const std::map<std::string, double>& doc_tf(std::uint64_t doc_id) const { return tf.at(doc_id); }
};

// The default stopword list: common English function words (determiners,
// prepositions, pronouns, auxiliaries, conjunctions).
const std::set<std::string>& default_stopwords();

// Lowercases, splits on any non-alphanumeric byte, drops tokens shorter
// than two characters and stopwords. Order preserved. Rejects input
// containing NUL bytes (binary data) with an io error naming `origin`.
std::vector<std::string> tokenize_and_filter(std::string_view text,
                                             const std::set<std::string>& stopwords,
                                             const std::string& origin = "<memory>");

struct Corpus {
  std::vector<DocumentRecord> records;
  Vocabulary vocabulary;
};

// Ingests every regular file under `directory` (sorted by path), keeping
// documents whose distinct stem count lies in [min_kw, max_kw]. Tokens
// whose stem is a stopword are dropped as well.
Corpus build_corpus(const std::string& directory, std::size_t min_kw = 0,
                    std::size_t max_kw = std::numeric_limits<std::size_t>::max());

// Builds one record from in-memory text (ingestion path used by
// build_corpus and by the test fixtures).
DocumentRecord make_record(std::uint64_t doc_id, const std::string& source_path,
                           std::string_view text, const std::set<std::string>& stopwords);

Vocabulary build_vocabulary(const std::vector<DocumentRecord>& records);

TfIdfTable compute_tfidf(const std::vector<DocumentRecord>& records, const Vocabulary& vocab);

// OPUS-CORPUS/1 manifest: one header line, then one line per document with
// doc_id, distinct stem count, total stemmed token count and source path.
void write_corpus_manifest(const Corpus& corpus, const std::string& path);

}  // namespace opus
