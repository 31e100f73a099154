#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace opus::testsupport {

struct FixtureOptions {
  std::size_t files = 200;
  std::size_t topics = 12;
  std::size_t vocab_per_topic = 36;  // recurring topic vocabulary size
  std::size_t tokens_min = 110;
  std::size_t tokens_max = 180;
  double topic_fraction = 0.75;  // remaining tokens come from the shared list
  std::uint64_t seed = 42;
};

// Writes `files` plain-text files (file_0000.txt ...) under `dir`. Every
// file draws most of its tokens from one of `topics` disjoint vocabulary
// slices with a skewed frequency profile, so same-topic files form tight
// clusters in index space.
void generate_desk_corpus(const std::string& dir, const FixtureOptions& options);

// Convenience: fresh temp directory under the system temp root.
std::string make_temp_dir(const std::string& tag);

}  // namespace opus::testsupport
