#include "opus/hit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "opus/error.hpp"
#include "opus/opu.hpp"
#include "opus/rng.hpp"

namespace opus {

void ClusterParams::validate() const {
  if (tightness <= 0.0 || tightness > 1.0) throw validation_error("tightness must be in (0, 1]");
  if (min_split_size < 3) throw validation_error("min_split_size must be >= 3");
}

namespace {

double sq_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

// Lloyd iterations with k-means++ seeding. Ties in assignment go to the
// lower center index; empty clusters steal the point farthest from its
// center.
KmeansResult kmeans_once(std::span<const std::vector<double>> points, std::size_t k,
                         std::size_t max_iters, std::mt19937_64& gen) {
  const std::size_t n = points.size();
  const std::size_t dim = points[0].size();
  KmeansResult result;
  result.labels.assign(n, 0);

  // k-means++ seeding.
  std::vector<std::size_t> seeds;
  seeds.push_back(uniform_below(gen, n));
  std::vector<double> best_sq(n, std::numeric_limits<double>::max());
  while (seeds.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      best_sq[i] = std::min(best_sq[i], sq_distance(points[i], points[seeds.back()]));
      total += best_sq[i];
    }
    std::size_t chosen;
    if (total == 0.0) {
      chosen = uniform_below(gen, n);  // all points coincide with a seed
    } else {
      double target = uniform01(gen) * total;
      chosen = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        target -= best_sq[i];
        if (target <= 0.0) {
          chosen = i;
          break;
        }
      }
    }
    seeds.push_back(chosen);
  }
  result.centers.clear();
  for (std::size_t s : seeds) result.centers.push_back(points[s]);

  std::vector<std::size_t> counts(k, 0);
  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::max();
      for (std::size_t c = 0; c < k; ++c) {
        const double d = sq_distance(points[i], result.centers[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (result.labels[i] != best) {
        result.labels[i] = best;
        changed = true;
      }
    }

    // Recompute means.
    for (auto& c : result.centers) std::fill(c.begin(), c.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      auto& c = result.centers[result.labels[i]];
      for (std::size_t d = 0; d < dim; ++d) c[d] += points[i][d];
      ++counts[result.labels[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        // Re-seat the empty cluster on the point farthest from its center.
        std::size_t far_i = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (counts[result.labels[i]] <= 1) continue;
          const double dist = sq_distance(points[i], result.centers[result.labels[i]]);
          if (dist > far_d) {
            far_d = dist;
            far_i = i;
          }
        }
        if (far_d < 0.0) continue;  // nothing stealable; cluster stays empty
        --counts[result.labels[far_i]];
        result.labels[far_i] = c;
        counts[c] = 1;
        result.centers[c] = points[far_i];
        changed = true;
        continue;
      }
      for (std::size_t d = 0; d < dim; ++d) {
        result.centers[c][d] /= static_cast<double>(counts[c]);
      }
    }
    if (!changed) break;
  }

  // Final exact means over the final assignment.
  for (auto& c : result.centers) std::fill(c.begin(), c.end(), 0.0);
  std::fill(counts.begin(), counts.end(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    auto& c = result.centers[result.labels[i]];
    for (std::size_t d = 0; d < dim; ++d) c[d] += points[i][d];
    ++counts[result.labels[i]];
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] == 0) continue;
    for (std::size_t d = 0; d < dim; ++d) {
      result.centers[c][d] /= static_cast<double>(counts[c]);
    }
  }
  return result;
}

double inertia(std::span<const std::vector<double>> points, const KmeansResult& r) {
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    total += sq_distance(points[i], r.centers[r.labels[i]]);
  }
  return total;
}

// Best of several seeded restarts; single inits land in poor partitions
// often enough to distort the tree above them.
KmeansResult kmeans(std::span<const std::vector<double>> points, std::size_t k,
                    std::size_t max_iters, std::size_t restarts, std::mt19937_64& gen) {
  KmeansResult best;
  double best_inertia = std::numeric_limits<double>::max();
  for (std::size_t attempt = 0; attempt < std::max<std::size_t>(1, restarts); ++attempt) {
    KmeansResult r = kmeans_once(points, k, max_iters, gen);
    const double score = inertia(points, r);
    if (score < best_inertia) {
      best_inertia = score;
      best = std::move(r);
    }
  }
  return best;
}

}  // namespace

KmeansResult dynamic_kmeans(std::span<const std::vector<double>> points,
                            const ClusterParams& params) {
  params.validate();
  if (points.empty()) throw empty_input_error("no points to cluster");
  const std::size_t n_points = points.size();
  const std::size_t cap = (n_points + 1) / 2;
  std::mt19937_64 gen(derive_seed(params.seed, 0xc105));

  std::size_t n = 1;
  KmeansResult result;
  while (true) {
    result = kmeans(points, n, params.max_kmeans_iters, params.kmeans_restarts, gen);
    if (n >= cap) break;

    // One pass over the clusters; every too-tight cluster asks for one
    // more cluster, as in the construction loop.
    std::size_t requested = 0;
    for (std::size_t c = 0; c < n; ++c) {
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < n_points; ++i) {
        if (result.labels[i] == c) members.push_back(i);
      }
      if (members.size() < params.min_split_size) continue;
      double sum = 0.0;
      double min_d = std::numeric_limits<double>::max();
      std::size_t pairs = 0;
      for (std::size_t a = 0; a < members.size(); ++a) {
        for (std::size_t b = a + 1; b < members.size(); ++b) {
          const double d = std::sqrt(sq_distance(points[members[a]], points[members[b]]));
          sum += d;
          min_d = std::min(min_d, d);
          ++pairs;
        }
      }
      const double avg = sum / static_cast<double>(pairs);
      if (min_d < params.tightness * avg) ++requested;
    }
    if (requested == 0) break;
    n = std::min(cap, n + requested);
  }
  return result;
}

bool HitTree::encrypted() const {
  return !nodes.empty() && nodes[root_id].center_enc.has_value() &&
         nodes[root_id].center_plain.empty();
}

std::size_t HitTree::leaves_under(std::uint64_t id) const {
  const HitNode& nd = node(id);
  if (nd.is_leaf()) return 1;
  std::size_t total = 0;
  for (std::uint64_t child : nd.children) total += leaves_under(child);
  return total;
}

HitTree build_hit(const std::vector<std::pair<std::uint64_t, BloomVector>>& files,
                  const ClusterParams& params) {
  params.validate();
  if (files.empty()) throw empty_input_error("no files to index");
  HitTree tree;
  tree.leaf_count = files.size();
  tree.dimension = files[0].second.size();

  std::vector<std::uint64_t> level;  // node ids of the current layer
  for (const auto& [doc_id, bf] : files) {
    if (bf.size() != tree.dimension) throw dimension_error("inconsistent file vector lengths");
    HitNode leaf;
    leaf.node_id = tree.nodes.size();
    leaf.center_plain = bf.weights;
    leaf.doc_id = doc_id;
    level.push_back(leaf.node_id);
    tree.nodes.push_back(std::move(leaf));
  }

  std::uint64_t round = 0;
  while (level.size() > 1 || round == 0) {
    std::vector<std::vector<double>> points;
    points.reserve(level.size());
    for (std::uint64_t id : level) points.push_back(tree.nodes[id].center_plain);

    ClusterParams round_params = params;
    round_params.seed = derive_seed(params.seed, 0xb11d + round);
    KmeansResult clusters = dynamic_kmeans(points, round_params);

    std::vector<std::uint64_t> next;
    for (std::size_t c = 0; c < clusters.centers.size(); ++c) {
      std::vector<std::uint64_t> members;
      for (std::size_t i = 0; i < level.size(); ++i) {
        if (clusters.labels[i] == c) members.push_back(level[i]);
      }
      if (members.empty()) continue;
      HitNode internal;
      internal.node_id = tree.nodes.size();
      internal.children = members;
      // Mean of the children, independent of what k-means reported.
      internal.center_plain.assign(tree.dimension, 0.0);
      for (std::uint64_t child : members) {
        for (std::size_t d = 0; d < tree.dimension; ++d) {
          internal.center_plain[d] += tree.nodes[child].center_plain[d];
        }
        tree.nodes[child].parent = internal.node_id;
      }
      for (double& w : internal.center_plain) w /= static_cast<double>(members.size());
      next.push_back(internal.node_id);
      tree.nodes.push_back(std::move(internal));
    }
    level = std::move(next);
    ++round;
  }
  tree.root_id = level[0];
  tree.nodes[tree.root_id].parent = tree.root_id;
  tree.depth = round;
  return tree;
}

HitTree encrypt_tree(const HitTree& tree, const SecretKey& key, std::mt19937_64& rng,
                     double r_scale) {
  if (tree.dimension != key.m) throw dimension_error("tree dimension does not match key");
  HitTree out = tree;
  for (HitNode& node : out.nodes) {
    BloomVector center;
    center.kind = BloomKind::file;
    center.weights = node.center_plain;
    EncryptedIndex enc = enc_index(center, key, rng, r_scale);
    enc.node_id = node.node_id;
    node.center_enc = std::move(enc);
    node.center_plain.clear();
  }
  return out;
}

namespace {

struct Searcher {
  const HitTree& tree;
  const Trapdoor& trapdoor;
  std::size_t evaluations = 0;
  std::vector<std::uint64_t> path;
  std::vector<char> on_path;   // per node id, already recorded in path
  std::vector<char> consumed;  // per node id, leaves already returned
  std::vector<std::pair<std::uint64_t, double>> collected;  // (doc_id, score)

  explicit Searcher(const HitTree& t, const Trapdoor& td)
      : tree(t), trapdoor(td), on_path(t.nodes.size(), 0), consumed(t.nodes.size(), 0) {}

  void enter(std::uint64_t id) {
    if (!on_path[id]) {
      on_path[id] = 1;
      path.push_back(id);
    }
  }

  double score(std::uint64_t id) {
    ++evaluations;
    return relevance(*tree.node(id).center_enc, trapdoor);
  }

  std::size_t unconsumed_leaves(std::uint64_t id) const {
    const HitNode& nd = tree.node(id);
    if (nd.is_leaf()) return consumed[id] ? 0 : 1;
    std::size_t total = 0;
    for (std::uint64_t child : nd.children) total += unconsumed_leaves(child);
    return total;
  }

  // Descends from `start`, taking up to `want` leaves; returns how many
  // were taken. Children whose subtrees are exhausted are skipped.
  void descend(std::uint64_t start, std::size_t want) {
    std::uint64_t current = start;
    enter(current);

    while (!tree.node(current).is_leaf() &&
           !tree.node(tree.node(current).children.front()).is_leaf()) {
      std::uint64_t best = 0;
      double best_score = -std::numeric_limits<double>::infinity();
      bool found = false;
      for (std::uint64_t child : tree.node(current).children) {
        if (unconsumed_leaves(child) == 0) continue;
        const double s = score(child);
        if (!found || s > best_score || (s == best_score && child < best)) {
          best = child;
          best_score = s;
          found = true;
        }
      }
      if (!found) return;  // subtree exhausted
      current = best;
      enter(current);
    }

    // `current` is the last internal node (its children are leaves).
    const HitNode& cluster = tree.node(current);
    std::vector<std::pair<std::uint64_t, double>> scored;  // (leaf node id, score)
    for (std::uint64_t child : cluster.children) {
      if (consumed[child]) continue;
      scored.emplace_back(child, score(child));
    }
    std::sort(scored.begin(), scored.end(), [&](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return *tree.node(a.first).doc_id < *tree.node(b.first).doc_id;
    });
    const std::size_t take = std::min(want, scored.size());
    for (std::size_t i = 0; i < take; ++i) {
      consumed[scored[i].first] = 1;
      collected.emplace_back(*tree.node(scored[i].first).doc_id, scored[i].second);
    }

    const std::size_t remaining = want - take;
    if (remaining == 0) return;

    // Backtrack to the nearest ancestor that still has enough unconsumed
    // leaves (single-child ancestors are skipped by the same walk), then
    // recurse for the remainder.
    std::uint64_t anchor = current;
    while (anchor != tree.root_id &&
           (tree.node(anchor).children.size() == 1 || unconsumed_leaves(anchor) < remaining)) {
      anchor = tree.node(anchor).parent;
    }
    if (unconsumed_leaves(anchor) == 0) return;  // tree exhausted
    descend(anchor, remaining);
  }
};

void finalize_entries(std::vector<std::pair<std::uint64_t, double>>& entries) {
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
}

}  // namespace

SearchResult search(const HitTree& tree, const Trapdoor& trapdoor, std::size_t k) {
  if (k < 1) throw validation_error("k must be >= 1");
  if (!tree.encrypted()) throw consistency_error("tree is not encrypted");

  SearchResult result;
  result.short_result = k > tree.leaf_count;
  const std::size_t want = std::min(k, tree.leaf_count);

  // Root whose children are leaves: degenerate to scanning the leaf layer.
  Searcher searcher(tree, trapdoor);
  searcher.descend(tree.root_id, want);
  finalize_entries(searcher.collected);
  result.entries = std::move(searcher.collected);
  result.visited_path = std::move(searcher.path);
  result.score_evaluations = searcher.evaluations;
  return result;
}

SearchResult linear_search(std::span<const EncryptedIndex> file_indices,
                           const Trapdoor& trapdoor, std::size_t k) {
  if (k < 1) throw validation_error("k must be >= 1");
  SearchResult result;
  result.short_result = k > file_indices.size();
  result.score_evaluations = file_indices.size();
  result.entries.reserve(file_indices.size());
  for (const EncryptedIndex& idx : file_indices) {
    result.entries.emplace_back(idx.node_id, relevance(idx, trapdoor));
  }
  finalize_entries(result.entries);
  if (result.entries.size() > k) result.entries.resize(k);
  return result;
}

}  // namespace opus
