#include "opus/lsh_bloom.hpp"

#include <algorithm>
#include <cmath>

#include "opus/error.hpp"
#include "opus/rng.hpp"

namespace opus {

LshFamily generate_family(std::uint64_t seed, std::size_t l, double bucket_width,
                          std::size_t dim, std::size_t m) {
  if (l < 1 || m < 1 || dim < 1) throw validation_error("l, m and dim must be >= 1");
  if (bucket_width <= 0.0) throw validation_error("bucket width must be positive");
  LshFamily family;
  family.bucket_width = bucket_width;
  family.seed = seed;
  family.dimension = dim;
  family.bloom_bits = m;
  family.functions.resize(l);
  std::mt19937_64 gen(seed);
  for (LshFunction& fn : family.functions) {
    fn.projection.resize(dim);
    for (double& r : fn.projection) r = gaussian(gen);
    fn.offset = uniform01(gen) * bucket_width;
    fn.slot_salt = gen();
  }
  return family;
}

std::vector<std::size_t> hash_keyword(const std::vector<double>& v, const LshFamily& family) {
  if (v.size() != family.dimension) {
    throw dimension_error("vector dimension does not match LSH family");
  }
  std::vector<std::size_t> slots;
  slots.reserve(family.functions.size());
  const auto m = static_cast<std::int64_t>(family.bloom_bits);
  for (const LshFunction& fn : family.functions) {
    double proj = fn.offset;
    for (std::size_t i = 0; i < v.size(); ++i) proj += fn.projection[i] * v[i];
    const auto bucket = static_cast<std::int64_t>(std::floor(proj / family.bucket_width));
    std::int64_t slot = (bucket + static_cast<std::int64_t>(fn.slot_salt % static_cast<std::uint64_t>(m))) % m;
    if (slot < 0) slot += m;
    slots.push_back(static_cast<std::size_t>(slot));
  }
  std::sort(slots.begin(), slots.end());
  slots.erase(std::unique(slots.begin(), slots.end()), slots.end());
  return slots;
}

BloomVector build_keyword_bf(const std::vector<double>& v, const LshFamily& family) {
  BloomVector bf;
  bf.kind = BloomKind::keyword;
  bf.weights.assign(family.bloom_bits, 0.0);
  for (std::size_t slot : hash_keyword(v, family)) bf.weights[slot] = 1.0;
  return bf;
}

bool bloom_contains(const BloomVector& filter, const std::vector<std::size_t>& slots) {
  for (std::size_t slot : slots) {
    if (filter.weights.at(slot) == 0.0) return false;
  }
  return true;
}

BloomVector build_file_bf(const std::vector<std::string>& stems,
                          const std::map<std::string, double>& weights,
                          const LshFamily& family, const KeywordEncoder& encoder) {
  BloomVector bf;
  bf.kind = BloomKind::file;
  bf.weights.assign(family.bloom_bits, 0.0);
  for (const std::string& s : stems) {
    auto it = weights.find(s);
    if (it == weights.end()) throw consistency_error("no weight for stem: " + s);
    for (std::size_t slot : hash_keyword(encoder(s), family)) {
      bf.weights[slot] += it->second;
    }
  }
  return bf;
}

BloomVector build_query_bf(const std::vector<std::string>& stems, const LshFamily& family,
                           const KeywordEncoder& encoder) {
  if (stems.empty()) throw empty_input_error("empty query");
  BloomVector bf;
  bf.kind = BloomKind::query;
  bf.weights.assign(family.bloom_bits, 0.0);
  for (const std::string& s : stems) {
    for (std::size_t slot : hash_keyword(encoder(s), family)) {
      bf.weights[slot] += 1.0;
    }
  }
  return bf;
}

double expected_fp_rate(std::size_t l, double n, std::size_t m) {
  if (l < 1 || m < 1) throw validation_error("l and m must be >= 1");
  if (n < 0.0) throw validation_error("n must be non-negative");
  if (n == 0.0) return 0.0;
  const double load = static_cast<double>(l) * n / static_cast<double>(m);
  return std::pow(1.0 - std::exp(-load), static_cast<double>(l));
}

double minimal_fp_rate(std::size_t l) {
  return std::pow(0.5, static_cast<double>(l));
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw dimension_error("vector length mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

}  // namespace opus
