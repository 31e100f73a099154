#include "opus/formats.hpp"

#include <fstream>

#include "opus/error.hpp"
#include "opus/io.hpp"

namespace opus {

namespace io {

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open: " + path);
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  return data;
}

void write_file(const std::string& path, std::span<const std::uint8_t> data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot write: " + path);
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
  if (!out) throw io_error("write failed: " + path);
}

}  // namespace io

namespace {

void put_magic(std::vector<std::uint8_t>& out, std::string_view magic) {
  out.insert(out.end(), magic.begin(), magic.end());
}

void put_matrix(std::vector<std::uint8_t>& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) io::put_f64(out, m(r, c));
  }
}

Eigen::MatrixXd get_matrix(io::Reader& r, std::size_t dim) {
  Eigen::MatrixXd m(dim, dim);
  for (std::size_t row = 0; row < dim; ++row) {
    for (std::size_t col = 0; col < dim; ++col) {
      m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = r.f64();
    }
  }
  return m;
}

void put_vector(std::vector<std::uint8_t>& out, const Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) io::put_f64(out, v(i));
}

Eigen::VectorXd get_vector(io::Reader& r, std::size_t dim) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) v(static_cast<Eigen::Index>(i)) = r.f64();
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_key(const SecretKey& key) {
  std::vector<std::uint8_t> out;
  put_magic(out, kKeyMagic);
  io::put_u64(out, key.m);
  io::put_u64(out, key.lsh_seed);
  for (std::uint8_t bit : key.split) io::put_u64(out, bit);
  put_matrix(out, key.m1);
  put_matrix(out, key.m2);
  return out;
}

SecretKey decode_key(std::span<const std::uint8_t> data) {
  io::Reader r(data, "key file");
  r.expect_magic(kKeyMagic);
  SecretKey key;
  key.m = r.u64();
  if (key.m < 2) throw format_error("key file: dimension must be >= 2");
  // 8 (lsh_seed) + 8m (split) + 16m^2 (two matrices) bytes must remain.
  const unsigned __int128 expect = 8 + static_cast<unsigned __int128>(key.m) * 8 +
                                   static_cast<unsigned __int128>(key.m) * key.m * 16;
  if (static_cast<unsigned __int128>(r.remaining()) != expect) {
    throw format_error("key file: size does not match dimension");
  }
  key.lsh_seed = r.u64();
  key.split.resize(key.m);
  for (std::uint8_t& bit : key.split) {
    std::uint64_t v = r.u64();
    if (v > 1) throw format_error("key file: split entries must be 0 or 1");
    bit = static_cast<std::uint8_t>(v);
  }
  key.m1 = get_matrix(r, key.m);
  key.m2 = get_matrix(r, key.m);
  r.expect_end();
  key.compute_inverses();
  return key;
}

void write_key(const SecretKey& key, const std::string& path) {
  io::write_file(path, encode_key(key));
}

SecretKey read_key(const std::string& path) {
  auto data = io::read_file(path);
  return decode_key(data);
}

std::vector<std::uint8_t> encode_index(const SignedIndex& index) {
  const HitTree& tree = index.tree;
  std::vector<std::uint8_t> out;
  put_magic(out, kHitMagic);
  io::put_u64(out, tree.dimension);
  io::put_u64(out, tree.epoch);
  io::put_u64(out, tree.root_id);
  io::put_u64(out, tree.nodes.size());
  for (const HitNode& node : tree.nodes) {
    if (!node.center_enc.has_value()) throw consistency_error("unencrypted node in index");
    io::put_u64(out, node.node_id);
    io::put_u64(out, node.children.size());
    for (std::uint64_t child : node.children) io::put_u64(out, child);
    io::put_u8(out, node.doc_id.has_value() ? 1 : 0);
    if (node.doc_id.has_value()) io::put_u64(out, *node.doc_id);
    put_vector(out, node.center_enc->part1);
    put_vector(out, node.center_enc->part2);
  }
  io::put_u64(out, index.signatures.size());
  for (const auto& [node_id, sig] : index.signatures) {
    io::put_u64(out, node_id);
    io::put_u64(out, sig.signature.size());
    io::put_bytes(out, sig.signature);
  }
  return out;
}

SignedIndex decode_index(std::span<const std::uint8_t> data) {
  io::Reader r(data, "index file");
  r.expect_magic(kHitMagic);
  SignedIndex out;
  HitTree& tree = out.tree;
  tree.dimension = r.count(16);  // every node stores 16*dim center bytes
  if (tree.dimension == 0) throw format_error("index file: zero dimension");
  tree.epoch = r.u64();
  tree.root_id = r.u64();
  const std::uint64_t node_count = r.count(17 + 16 * tree.dimension);
  tree.nodes.resize(node_count);
  for (std::uint64_t i = 0; i < node_count; ++i) {
    HitNode node;
    node.node_id = r.u64();
    if (node.node_id != i) throw format_error("index file: nodes must be stored in id order");
    const std::uint64_t child_count = r.count(8);
    node.children.reserve(child_count);
    for (std::uint64_t c = 0; c < child_count; ++c) node.children.push_back(r.u64());
    if (r.u8() != 0) node.doc_id = r.u64();
    EncryptedIndex enc;
    enc.node_id = node.node_id;
    enc.part1 = get_vector(r, tree.dimension);
    enc.part2 = get_vector(r, tree.dimension);
    node.center_enc = std::move(enc);
    tree.nodes[i] = std::move(node);
  }
  const std::uint64_t sig_count = r.count(16);
  for (std::uint64_t i = 0; i < sig_count; ++i) {
    NodeSignature sig;
    sig.node_id = r.u64();
    sig.signature = r.bytes(r.count(1));
    out.signatures.emplace(sig.node_id, std::move(sig));
  }
  r.expect_end();

  if (tree.root_id >= tree.nodes.size()) throw format_error("index file: bad root id");
  // Rebuild parents, leaf count and depth from the stored topology.
  tree.leaf_count = 0;
  for (HitNode& node : tree.nodes) node.parent = tree.root_id;
  for (const HitNode& node : tree.nodes) {
    for (std::uint64_t child : node.children) {
      if (child >= tree.nodes.size()) throw format_error("index file: bad child id");
      tree.nodes[child].parent = node.node_id;
    }
  }
  std::size_t depth = 0;
  for (const HitNode& node : tree.nodes) {
    if (!node.is_leaf()) continue;
    ++tree.leaf_count;
    std::size_t hops = 0;
    std::uint64_t id = node.node_id;
    while (id != tree.root_id) {
      id = tree.nodes[id].parent;
      ++hops;
      if (hops > tree.nodes.size()) throw format_error("index file: cyclic parent links");
    }
    depth = std::max(depth, hops);
  }
  tree.depth = depth;

  // Digests for loaded signatures are recomputed lazily by verifiers; keep
  // the stored signatures as-is.
  for (auto& [node_id, sig] : out.signatures) {
    if (node_id >= tree.nodes.size()) throw format_error("index file: signature for unknown node");
    sig.digest = sha256(canonical_node_bytes(tree, node_id));
  }
  return out;
}

void write_index(const SignedIndex& index, const std::string& path) {
  io::write_file(path, encode_index(index));
}

SignedIndex read_index(const std::string& path) {
  auto data = io::read_file(path);
  return decode_index(data);
}

std::vector<std::uint8_t> encode_trapdoor(const Trapdoor& trapdoor) {
  std::vector<std::uint8_t> out;
  put_magic(out, kTrapdoorMagic);
  io::put_u64(out, static_cast<std::uint64_t>(trapdoor.part1.size()));
  put_vector(out, trapdoor.part1);
  put_vector(out, trapdoor.part2);
  return out;
}

Trapdoor decode_trapdoor(std::span<const std::uint8_t> data) {
  io::Reader r(data, "trapdoor file");
  r.expect_magic(kTrapdoorMagic);
  const std::uint64_t m = r.count(16);
  Trapdoor t;
  t.part1 = get_vector(r, m);
  t.part2 = get_vector(r, m);
  r.expect_end();
  return t;
}

void write_trapdoor(const Trapdoor& trapdoor, const std::string& path) {
  io::write_file(path, encode_trapdoor(trapdoor));
}

Trapdoor read_trapdoor(const std::string& path) {
  auto data = io::read_file(path);
  return decode_trapdoor(data);
}

std::vector<std::uint8_t> encode_proof(const VerificationProof& proof) {
  std::vector<std::uint8_t> out;
  put_magic(out, kProofMagic);
  io::put_u64(out, proof.result_doc_ids.size());
  for (std::uint64_t doc : proof.result_doc_ids) io::put_u64(out, doc);
  io::put_u64(out, proof.nodes.size());
  for (const ProofNode& node : proof.nodes) {
    io::put_u64(out, node.canonical.size());
    io::put_bytes(out, node.canonical);
    io::put_u64(out, node.signature.size());
    io::put_bytes(out, node.signature);
  }
  return out;
}

VerificationProof decode_proof(std::span<const std::uint8_t> data) {
  io::Reader r(data, "proof file");
  r.expect_magic(kProofMagic);
  VerificationProof proof;
  const std::uint64_t results = r.count(8);
  proof.result_doc_ids.reserve(results);
  for (std::uint64_t i = 0; i < results; ++i) proof.result_doc_ids.push_back(r.u64());
  const std::uint64_t nodes = r.count(17);
  if (nodes == 0) throw format_error("proof file: no nodes");
  proof.nodes.reserve(nodes);
  for (std::uint64_t i = 0; i < nodes; ++i) {
    ProofNode node;
    node.canonical = r.bytes(r.count(1));
    node.signature = r.bytes(r.count(1));
    proof.nodes.push_back(std::move(node));
  }
  r.expect_end();
  return proof;
}

void write_proof(const VerificationProof& proof, const std::string& path) {
  io::write_file(path, encode_proof(proof));
}

VerificationProof read_proof(const std::string& path) {
  auto data = io::read_file(path);
  return decode_proof(data);
}

void write_public_key(const std::array<std::uint8_t, 32>& key, const std::string& path) {
  std::vector<std::uint8_t> out;
  put_magic(out, kPublicKeyMagic);
  io::put_bytes(out, key);
  io::write_file(path, out);
}

std::array<std::uint8_t, 32> read_public_key(const std::string& path) {
  auto data = io::read_file(path);
  io::Reader r(data, "public key file");
  r.expect_magic(kPublicKeyMagic);
  auto bytes = r.bytes(32);
  r.expect_end();
  std::array<std::uint8_t, 32> key{};
  std::copy(bytes.begin(), bytes.end(), key.begin());
  return key;
}

}  // namespace opus
