#include "opus/secure_knn.hpp"

#include "opus/error.hpp"
#include "opus/rng.hpp"

namespace opus {

namespace {

double cond_estimate_1norm(const Eigen::MatrixXd& m, const Eigen::MatrixXd& m_inv) {
  const double norm = m.cwiseAbs().colwise().sum().maxCoeff();
  const double inv_norm = m_inv.cwiseAbs().colwise().sum().maxCoeff();
  return norm * inv_norm;
}

Eigen::MatrixXd sample_matrix(std::size_t m, std::mt19937_64& gen) {
  Eigen::MatrixXd out(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          uniform_in(gen, -1.0, 1.0);
    }
  }
  return out;
}

constexpr double kMaxCondition = 1e6;
constexpr int kMaxResamples = 8;

Eigen::MatrixXd sample_invertible(std::size_t m, std::mt19937_64& gen, Eigen::MatrixXd& inv_out) {
  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    Eigen::MatrixXd candidate = sample_matrix(m, gen);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(candidate);
    if (!lu.isInvertible()) continue;
    Eigen::MatrixXd inv = lu.inverse();
    if (cond_estimate_1norm(candidate, inv) > kMaxCondition) continue;
    inv_out = std::move(inv);
    return candidate;
  }
  throw validation_error("could not sample a well-conditioned key matrix");
}

}  // namespace

void SecretKey::compute_inverses() {
  m1_inv = m1.fullPivLu().inverse();
  m2_inv = m2.fullPivLu().inverse();
}

SecretKey keygen(std::size_t m, std::uint64_t seed) {
  if (m < 2) throw validation_error("key dimension must be >= 2");
  SecretKey key;
  key.m = m;
  std::mt19937_64 gen(derive_seed(seed, 0x5ec0));
  key.m1 = sample_invertible(m, gen, key.m1_inv);
  key.m2 = sample_invertible(m, gen, key.m2_inv);
  key.split.resize(m);
  for (std::uint8_t& bit : key.split) bit = static_cast<std::uint8_t>(gen() & 1u);
  key.lsh_seed = derive_seed(seed, 0x15a8);
  return key;
}

namespace {

// r in (0, scale): the published construction only asks for "a small
// randomness"; zero is excluded so split halves always differ.
double draw_r(std::mt19937_64& rng, double scale) {
  double r;
  do {
    r = uniform01(rng);
  } while (r == 0.0);
  return r * scale;
}

}  // namespace

EncryptedIndex enc_index(const BloomVector& index, const SecretKey& key, std::mt19937_64& rng,
                         double r_scale) {
  if (index.size() != key.m) throw dimension_error("index length does not match key dimension");
  const auto n = static_cast<Eigen::Index>(key.m);
  Eigen::VectorXd split_a(n);
  Eigen::VectorXd split_b(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double value = index.weights[static_cast<std::size_t>(j)];
    if (key.split[static_cast<std::size_t>(j)] == 1) {
      split_a(j) = value;
      split_b(j) = value;
    } else {
      const double r = draw_r(rng, r_scale);
      split_a(j) = value / 2.0 + r;
      split_b(j) = value / 2.0 - r;
    }
  }
  EncryptedIndex out;
  out.part1 = key.m1.transpose() * split_a;
  out.part2 = key.m2.transpose() * split_b;
  return out;
}

Trapdoor enc_query(const BloomVector& query, const SecretKey& key, std::mt19937_64& rng,
                   double r_scale) {
  if (query.size() != key.m) throw dimension_error("query length does not match key dimension");
  const auto n = static_cast<Eigen::Index>(key.m);
  Eigen::VectorXd split_a(n);
  Eigen::VectorXd split_b(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double value = query.weights[static_cast<std::size_t>(j)];
    if (key.split[static_cast<std::size_t>(j)] == 0) {
      split_a(j) = value;
      split_b(j) = value;
    } else {
      const double r = draw_r(rng, r_scale);
      split_a(j) = value / 2.0 + r;
      split_b(j) = value / 2.0 - r;
    }
  }
  Trapdoor out;
  out.part1 = key.m1_inv * split_a;
  out.part2 = key.m2_inv * split_b;
  return out;
}

double relevance(const EncryptedIndex& index, const Trapdoor& trapdoor) {
  if (index.part1.size() != trapdoor.part1.size() ||
      index.part2.size() != trapdoor.part2.size()) {
    throw dimension_error("index/trapdoor dimension mismatch");
  }
  return index.part1.dot(trapdoor.part1) + index.part2.dot(trapdoor.part2);
}

}  // namespace opus
