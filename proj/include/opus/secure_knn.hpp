#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

#include "opus/lsh_bloom.hpp"

namespace opus {

// Secure-kNN key material: two secret invertible matrices and a binary
// split vector. Inner products of encrypted index/trapdoor pairs equal the
// plaintext inner products.
//
// Security caveat: this construction is known to be breakable under
// known-plaintext attack; it provides the scheme as published, not a
// hardened variant.
struct SecretKey {
  std::size_t m = 0;
  Eigen::MatrixXd m1;
  Eigen::MatrixXd m2;
  std::vector<std::uint8_t> split;  // S, entries in {0,1}
  std::uint64_t lsh_seed = 0;

  // Derived at generation/load time, not serialized.
  Eigen::MatrixXd m1_inv;
  Eigen::MatrixXd m2_inv;

  void compute_inverses();
};

struct EncryptedIndex {
  Eigen::VectorXd part1;  // M1^T . I'
  Eigen::VectorXd part2;  // M2^T . I''
  std::uint64_t node_id = 0;
};

struct Trapdoor {
  Eigen::VectorXd part1;  // M1^-1 . Q'
  Eigen::VectorXd part2;  // M2^-1 . Q''
};

// Deterministic from seed. Matrix entries are uniform in [-1, 1]; a draw
// whose 1-norm condition estimate exceeds 1e6 is resampled, up to 8 times.
SecretKey keygen(std::size_t m, std::uint64_t seed);

// Splits I by the key's split vector (copy where S=1, randomized halves
// where S=0, fresh r per coordinate in (0, r_scale)) and applies the
// matrices.
EncryptedIndex enc_index(const BloomVector& index, const SecretKey& key, std::mt19937_64& rng,
                         double r_scale = 1.0);

// Mirror image of enc_index: splits where S=1, copies where S=0.
Trapdoor enc_query(const BloomVector& query, const SecretKey& key, std::mt19937_64& rng,
                   double r_scale = 1.0);

// part1 . part1 + part2 . part2 == I . Q up to floating-point error.
double relevance(const EncryptedIndex& index, const Trapdoor& trapdoor);

}  // namespace opus
