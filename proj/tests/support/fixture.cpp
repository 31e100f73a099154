#include "fixture.hpp"

#include <filesystem>
#include <fstream>
#include <atomic>
#include <cmath>
#include <random>
#include <unistd.h>

#include "opus/error.hpp"
#include "opus/rng.hpp"
#include "wordpool.hpp"

namespace opus::testsupport {

namespace fs = std::filesystem;

std::string make_temp_dir(const std::string& tag) {
  static std::atomic<unsigned> counter{0};
  fs::path dir = fs::temp_directory_path() /
                 ("opus_" + tag + "_" + std::to_string(::getpid()) + "_" +
                  std::to_string(counter.fetch_add(1)));
  fs::create_directories(dir);
  return dir.string();
}

void generate_desk_corpus(const std::string& dir, const FixtureOptions& options) {
  fs::create_directories(dir);
  std::mt19937_64 gen(derive_seed(options.seed, 0xf17e));

  // Disjoint topic vocabularies by striding the pool, so anagram families
  // spread across topics. Each topic keeps a bounded vocabulary that
  // recurs across its files; near-singleton stems would otherwise carry
  // huge ratio-form idf weights and drown the topic structure.
  std::vector<std::vector<const char*>> topic_vocab(options.topics);
  for (std::size_t i = 0; i < kWordPoolSize; ++i) {
    auto& vocab = topic_vocab[i % options.topics];
    if (vocab.size() < options.vocab_per_topic) vocab.push_back(kWordPool[i]);
  }

  for (std::size_t f = 0; f < options.files; ++f) {
    const std::size_t topic = f % options.topics;
    // Per-file subset of the topic vocabulary: files of one topic stay
    // close without becoming near-duplicates, which matters for the
    // cluster-splitting rule.
    std::vector<const char*> vocab;
    for (const char* word : topic_vocab[topic]) {
      if (uniform01(gen) >= 0.3) vocab.push_back(word);
    }
    if (vocab.empty()) vocab = topic_vocab[topic];
    const std::size_t tokens =
        options.tokens_min + uniform_below(gen, options.tokens_max - options.tokens_min + 1);

    char name[32];
    std::snprintf(name, sizeof(name), "file_%04zu.txt", f);
    std::ofstream out(fs::path(dir) / name);
    if (!out) throw io_error("cannot write fixture file");

    std::size_t line_len = 0;
    for (std::size_t t = 0; t < tokens; ++t) {
      const char* word;
      if (uniform01(gen) < options.topic_fraction) {
        // Mildly skewed pick: u^1.5 favors the front of the vocabulary
        // while keeping every topic word in regular circulation.
        const double u = uniform01(gen);
        const auto rank = static_cast<std::size_t>(std::pow(u, 1.5) *
                                                   static_cast<double>(vocab.size()));
        word = vocab[std::min(rank, vocab.size() - 1)];
      } else {
        word = kSharedWords[uniform_below(gen, kSharedWordsSize)];
      }
      out << word;
      line_len += 1;
      if (line_len >= 12) {
        out << ".\n";
        line_len = 0;
      } else {
        out << ' ';
      }
    }
    out << "\n";
  }
}

}  // namespace opus::testsupport
