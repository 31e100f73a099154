#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "opus/lsh_bloom.hpp"
#include "opus/secure_knn.hpp"

namespace opus {

struct ClusterParams {
  double tightness = 0.4;             // e: split when R_min < e * R_avg
  std::size_t max_kmeans_iters = 100;
  std::size_t kmeans_restarts = 4;    // seeded k-means++ restarts, best inertia wins
  std::size_t min_split_size = 3;     // clusters smaller than this never split
  std::uint64_t seed = 0;

  void validate() const;
};

struct KmeansResult {
  std::vector<std::vector<double>> centers;
  std::vector<std::size_t> labels;  // one per input point
};

// Dynamic k-means: starts from one cluster and adds a cluster for every
// cluster whose minimum pairwise distance falls below tightness times its
// average pairwise distance, re-running k-means until stable. The cluster
// count is capped at ceil(points/2) so the tree always compresses.
KmeansResult dynamic_kmeans(std::span<const std::vector<double>> points,
                            const ClusterParams& params);

struct HitNode {
  std::uint64_t node_id = 0;
  std::vector<double> center_plain;          // empty once the tree is encrypted
  std::optional<EncryptedIndex> center_enc;
  std::vector<std::uint64_t> children;       // empty iff leaf
  std::optional<std::uint64_t> doc_id;       // present iff leaf
  std::uint64_t parent = 0;                  // root points at itself

  bool is_leaf() const { return doc_id.has_value(); }
};

struct HitTree {
  std::vector<HitNode> nodes;  // indexed by node_id
  std::uint64_t root_id = 0;
  std::size_t depth = 0;       // clustering rounds above the leaves
  std::size_t leaf_count = 0;
  std::size_t dimension = 0;
  std::uint64_t epoch = 0;

  const HitNode& node(std::uint64_t id) const { return nodes.at(id); }
  bool encrypted() const;
  std::size_t leaves_under(std::uint64_t id) const;
};

// Bottom-up construction: cluster the leaf vectors, replace each cluster by
// its mean, and repeat on the centers until a single cluster forms the
// root. Every internal center is the arithmetic mean of its children's
// plaintext vectors.
HitTree build_hit(const std::vector<std::pair<std::uint64_t, BloomVector>>& files,
                  const ClusterParams& params);

// Encrypts every node center and strips the plaintext centers, producing
// the outsourced form.
HitTree encrypt_tree(const HitTree& tree, const SecretKey& key, std::mt19937_64& rng,
                     double r_scale = 1.0);

struct SearchResult {
  std::vector<std::pair<std::uint64_t, double>> entries;  // (doc_id, score), ranked
  std::vector<std::uint64_t> visited_path;                // entered nodes, root first
  std::size_t score_evaluations = 0;
  bool short_result = false;  // k exceeded the leaf count
};

// Greedy descent to the best leaf cluster; when it holds fewer than k
// leaves, backtracks to the nearest ancestor with enough unconsumed leaves
// and re-descends, excluding leaves already taken. Ties break toward the
// smaller node id / doc id.
SearchResult search(const HitTree& tree, const Trapdoor& trapdoor, std::size_t k);

// Scores every index; the reference the tree search trades against.
SearchResult linear_search(std::span<const EncryptedIndex> file_indices,
                           const Trapdoor& trapdoor, std::size_t k);

}  // namespace opus
