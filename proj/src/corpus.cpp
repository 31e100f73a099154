#include "opus/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "opus/error.hpp"
#include "opus/stem.hpp"

namespace opus {

namespace {

bool is_word_char(unsigned char c) { return std::isalnum(c) != 0; }

}  // namespace

const std::set<std::string>& default_stopwords() {
  static const std::set<std::string> kStopwords = {
      "a",       "about",   "above",      "after",   "again",    "against", "all",
      "am",      "an",      "and",        "any",     "are",      "as",      "at",
      "be",      "because", "been",       "before",  "being",    "below",   "between",
      "both",    "but",     "by",         "can",     "cannot",   "could",   "did",
      "do",      "does",    "doing",      "down",    "during",   "each",    "few",
      "for",     "from",    "further",    "had",     "has",      "have",    "having",
      "he",      "her",     "here",       "hers",    "herself",  "him",     "himself",
      "his",     "how",     "i",          "if",      "in",       "into",    "is",
      "it",      "its",     "itself",     "just",    "me",       "more",    "most",
      "my",      "myself",  "no",         "nor",     "not",      "now",     "of",
      "off",     "on",      "once",       "only",    "or",       "other",   "ought",
      "our",     "ours",    "ourselves",  "out",     "over",     "own",     "same",
      "she",     "should",  "so",         "some",    "such",     "than",    "that",
      "the",     "their",   "theirs",     "them",    "themselves", "then",  "there",
      "these",   "they",    "this",       "those",   "through",  "to",      "too",
      "under",   "until",   "up",         "very",    "was",      "we",      "were",
      "what",    "when",    "where",      "which",   "while",    "who",     "whom",
      "why",     "will",    "with",       "would",   "you",      "your",    "yours",
      "yourself", "yourselves",
  };
  return kStopwords;
}

std::vector<std::string> tokenize_and_filter(std::string_view text,
                                             const std::set<std::string>& stopwords,
                                             const std::string& origin) {
  if (text.find('\0') != std::string_view::npos) {
    throw io_error("undecodable input (embedded NUL): " + origin);
  }
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (current.size() >= 2 && !stopwords.contains(current)) {
      tokens.push_back(current);
    }
    current.clear();
  };
  for (char ch : text) {
    unsigned char c = static_cast<unsigned char>(ch);
    if (is_word_char(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

DocumentRecord make_record(std::uint64_t doc_id, const std::string& source_path,
                           std::string_view text, const std::set<std::string>& stopwords) {
  DocumentRecord rec;
  rec.doc_id = doc_id;
  rec.source_path = source_path;
  rec.raw_keywords = tokenize_and_filter(text, stopwords, source_path);
  rec.stemmed_keywords.reserve(rec.raw_keywords.size());
  for (const std::string& tok : rec.raw_keywords) {
    std::string s = stem(tok);
    if (s.empty() || stopwords.contains(s)) continue;  // stemming can re-surface a stopword
    rec.stemmed_keywords.push_back(s);
    ++rec.keyword_counts[s];
  }
  return rec;
}

Vocabulary build_vocabulary(const std::vector<DocumentRecord>& records) {
  Vocabulary vocab;
  for (const DocumentRecord& rec : records) {
    for (const auto& [stem, count] : rec.keyword_counts) {
      ++vocab.doc_frequency[stem];
    }
  }
  vocab.stems.reserve(vocab.doc_frequency.size());
  for (const auto& [stem, df] : vocab.doc_frequency) vocab.stems.push_back(stem);
  return vocab;  // map iteration is sorted, so stems are sorted and unique
}

Corpus build_corpus(const std::string& directory, std::size_t min_kw, std::size_t max_kw) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(directory)) {
    throw io_error("corpus directory not found: " + directory);
  }
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(directory)) {
    if (entry.is_regular_file()) paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end());

  Corpus corpus;
  const auto& stopwords = default_stopwords();
  std::uint64_t next_id = 0;
  for (const fs::path& p : paths) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw io_error("unreadable corpus file: " + p.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    DocumentRecord rec = make_record(next_id, p.string(), buf.str(), stopwords);
    std::size_t distinct = rec.keyword_counts.size();
    if (distinct < min_kw || distinct > max_kw) continue;
    rec.doc_id = next_id++;
    corpus.records.push_back(std::move(rec));
  }
  if (corpus.records.empty()) {
    throw empty_input_error("no documents retained from " + directory);
  }
  corpus.vocabulary = build_vocabulary(corpus.records);
  return corpus;
}

double TfIdfTable::tfidf(const std::string& stem, std::uint64_t doc_id) const {
  const auto& doc = tf.at(doc_id);
  auto it = doc.find(stem);
  if (it == doc.end()) return 0.0;
  return it->second * idf.at(stem);
}

TfIdfTable compute_tfidf(const std::vector<DocumentRecord>& records, const Vocabulary& vocab) {
  TfIdfTable table;
  std::uint64_t max_id = 0;
  for (const DocumentRecord& rec : records) max_id = std::max(max_id, rec.doc_id);
  table.tf.resize(max_id + 1);

  const double n_docs = static_cast<double>(records.size());
  for (const DocumentRecord& rec : records) {
    double total = static_cast<double>(rec.stemmed_keywords.size());
    for (const auto& [stem, count] : rec.keyword_counts) {
      if (!vocab.doc_frequency.contains(stem)) {
        throw consistency_error("stem missing from vocabulary: " + stem);
      }
      table.tf[rec.doc_id][stem] = static_cast<double>(count) / total;
    }
  }
  for (const auto& [stem, df] : vocab.doc_frequency) {
    table.idf[stem] = n_docs / static_cast<double>(df);
  }
  return table;
}

void write_corpus_manifest(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write manifest: " + path);
  out << "OPUS-CORPUS/1\n";
  out << "files " << corpus.records.size() << "\n";
  for (const DocumentRecord& rec : corpus.records) {
    out << "file " << rec.doc_id << " " << rec.keyword_counts.size() << " "
        << rec.stemmed_keywords.size() << " " << rec.source_path << "\n";
  }
  if (!out) throw io_error("write failed: " + path);
}

}  // namespace opus
