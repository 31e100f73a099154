#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace opus {

// One p-stable hash: h(v) = floor((projection . v + offset) / width), with
// the bucket mapped into [0, m) by floored modulo after adding a
// per-function slot salt. Without the salt every function's small bucket
// range would reduce to the same few slots near 0 and m-1, collapsing the
// filter; the salt keeps the l functions independent as slot
// distributions, which the false-positive model assumes.
struct LshFunction {
  std::vector<double> projection;  // standard Gaussian entries
  double offset = 0.0;             // uniform in [0, width)
  std::uint64_t slot_salt = 0;
};

struct LshFamily {
  std::vector<LshFunction> functions;
  double bucket_width = 4.0;
  std::uint64_t seed = 0;
  std::size_t dimension = 0;
  std::size_t bloom_bits = 0;  // m

  std::size_t function_count() const { return functions.size(); }
};

enum class BloomKind { keyword, file, query };

struct BloomVector {
  std::vector<double> weights;
  BloomKind kind = BloomKind::keyword;

  std::size_t size() const { return weights.size(); }
};

// Deterministic family generation: same (seed, l, width, dim, m) is
// bit-identical. The Gaussian draws come from a pinned Box-Muller stream,
// not from std distribution adapters.
LshFamily generate_family(std::uint64_t seed, std::size_t l, double bucket_width,
                          std::size_t dim, std::size_t m);

// Distinct Bloom slots hit by the vector, sorted ascending. Buckets are
// mapped into [0, m) by floored modulo.
std::vector<std::size_t> hash_keyword(const std::vector<double>& v, const LshFamily& family);

BloomVector build_keyword_bf(const std::vector<double>& v, const LshFamily& family);

// Membership test used by the false-positive experiments: all slots of the
// probe are set in the filter.
bool bloom_contains(const BloomVector& filter, const std::vector<std::size_t>& slots);

using KeywordEncoder = std::function<std::vector<double>(const std::string&)>;

// Weighted sum of keyword filters: sum_k weight(k) * bf_k. Every stem must
// have a weight.
BloomVector build_file_bf(const std::vector<std::string>& stems,
                          const std::map<std::string, double>& weights,
                          const LshFamily& family, const KeywordEncoder& encoder);

// Unit-weight sum over the query stems.
BloomVector build_query_bf(const std::vector<std::string>& stems, const LshFamily& family,
                           const KeywordEncoder& encoder);

// Classic Bloom false-positive estimate (1 - e^{-l n / m})^l. `n` is real
// valued so the analytic optimum n = m ln2 / l can be evaluated exactly.
double expected_fp_rate(std::size_t l, double n, std::size_t m);

// The minimum of the estimate over n at fixed l, m: (1/2)^l, attained when
// n l = m ln 2.
double minimal_fp_rate(std::size_t l);

double dot(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace opus
