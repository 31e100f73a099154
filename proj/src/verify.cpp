#include "opus/verify.hpp"

#include <sodium.h>

#include <algorithm>
#include <set>

#include "opus/error.hpp"
#include "opus/io.hpp"

namespace opus {

namespace {

void ensure_sodium() {
  if (sodium_init() < 0) throw consistency_error("libsodium initialization failed");
}

}  // namespace

Digest sha256(std::span<const std::uint8_t> data) {
  ensure_sodium();
  Digest out{};
  crypto_hash_sha256(out.data(), data.data(), data.size());
  return out;
}

Ed25519Signer::Ed25519Signer(std::uint64_t seed) {
  ensure_sodium();
  std::array<std::uint8_t, crypto_sign_SEEDBYTES> sk_seed{};
  // Stretch the 8-byte seed into the 32-byte signing seed.
  std::array<std::uint8_t, 8> raw{};
  for (int i = 0; i < 8; ++i) raw[i] = static_cast<std::uint8_t>((seed >> (56 - 8 * i)) & 0xff);
  crypto_hash_sha256(sk_seed.data(), raw.data(), raw.size());
  crypto_sign_seed_keypair(public_key_.data(), secret_key_.data(), sk_seed.data());
}

std::vector<std::uint8_t> Ed25519Signer::sign(const Digest& digest) {
  std::vector<std::uint8_t> sig(crypto_sign_BYTES);
  unsigned long long len = 0;
  if (crypto_sign_detached(sig.data(), &len, digest.data(), digest.size(), secret_key_.data()) !=
      0) {
    throw consistency_error("signing failed");
  }
  sig.resize(len);
  return sig;
}

bool Ed25519Verifier::verify(const Digest& digest, std::span<const std::uint8_t> signature) const {
  ensure_sodium();
  if (signature.size() != crypto_sign_BYTES) return false;
  return crypto_sign_verify_detached(signature.data(), digest.data(), digest.size(),
                                     public_key_.data()) == 0;
}

std::vector<std::uint8_t> canonical_node_bytes(const HitTree& tree, std::uint64_t node_id) {
  const HitNode& node = tree.node(node_id);
  if (!node.center_enc.has_value()) throw consistency_error("node has no encrypted center");
  std::vector<std::uint8_t> out;
  io::put_u64(out, node.node_id);
  std::vector<std::uint64_t> children = node.children;
  std::sort(children.begin(), children.end());
  io::put_u64(out, children.size());
  for (std::uint64_t child : children) io::put_u64(out, child);
  io::put_u8(out, node.doc_id.has_value() ? 1 : 0);
  if (node.doc_id.has_value()) io::put_u64(out, *node.doc_id);
  const EncryptedIndex& enc = *node.center_enc;
  for (Eigen::Index i = 0; i < enc.part1.size(); ++i) io::put_f64(out, enc.part1(i));
  for (Eigen::Index i = 0; i < enc.part2.size(); ++i) io::put_f64(out, enc.part2(i));
  if (node_id == tree.root_id) io::put_u64(out, tree.epoch);
  return out;
}

ParsedProofNode parse_canonical_node(std::span<const std::uint8_t> bytes, bool is_root) {
  io::Reader r(bytes, "canonical node");
  ParsedProofNode node;
  node.node_id = r.u64();
  std::uint64_t child_count = r.u64();
  if (child_count > r.remaining() / 8) throw format_error("canonical node: bad child count");
  node.children.reserve(child_count);
  for (std::uint64_t i = 0; i < child_count; ++i) node.children.push_back(r.u64());
  node.is_leaf = r.u8() != 0;
  if (node.is_leaf) node.doc_id = r.u64();
  // The remainder is the two encrypted parts (and the epoch for the root);
  // their length must be consistent with some dimension m.
  std::size_t rest = r.remaining();
  if (is_root) {
    if (rest < 8) throw format_error("canonical node: missing epoch");
    rest -= 8;
  }
  if (rest % 16 != 0) throw format_error("canonical node: ragged center encoding");
  return node;
}

SignatureMap sign_tree(const HitTree& tree, TreeSigner& signer) {
  if (!tree.encrypted()) throw consistency_error("cannot sign an unencrypted tree");
  SignatureMap out;
  for (const HitNode& node : tree.nodes) {
    NodeSignature sig;
    sig.node_id = node.node_id;
    std::vector<std::uint8_t> canon = canonical_node_bytes(tree, node.node_id);
    sig.digest = sha256(canon);
    try {
      sig.signature = signer.sign(sig.digest);
    } catch (const Error& e) {
      throw consistency_error("signing node " + std::to_string(node.node_id) + ": " + e.what());
    }
    out.emplace(node.node_id, std::move(sig));
  }
  return out;
}

VerificationProof extract_proof(const HitTree& tree, const SignatureMap& signatures,
                                const SearchResult& result) {
  VerificationProof proof;
  for (const auto& [doc_id, score] : result.entries) proof.result_doc_ids.push_back(doc_id);

  std::vector<std::uint64_t> order;
  std::set<std::uint64_t> seen;
  auto add = [&](std::uint64_t id) {
    if (seen.insert(id).second) order.push_back(id);
  };

  if (!result.visited_path.empty()) {
    for (std::uint64_t id : result.visited_path) add(id);
  } else {
    // Linear-mode result: include each returned leaf's ancestor chain.
    std::map<std::uint64_t, std::uint64_t> doc_to_node;
    for (const HitNode& node : tree.nodes) {
      if (node.is_leaf()) doc_to_node[*node.doc_id] = node.node_id;
    }
    add(tree.root_id);
    for (const auto& [doc_id, score] : result.entries) {
      std::vector<std::uint64_t> chain;
      std::uint64_t id = doc_to_node.at(doc_id);
      while (id != tree.root_id) {
        chain.push_back(id);
        id = tree.node(id).parent;
      }
      for (auto it = chain.rbegin(); it != chain.rend(); ++it) add(*it);
    }
  }
  // Returned leaves (skipped when already on the path).
  std::map<std::uint64_t, std::uint64_t> doc_to_node;
  for (const HitNode& node : tree.nodes) {
    if (node.is_leaf()) doc_to_node[*node.doc_id] = node.node_id;
  }
  for (const auto& [doc_id, score] : result.entries) add(doc_to_node.at(doc_id));

  for (std::uint64_t id : order) {
    auto it = signatures.find(id);
    if (it == signatures.end()) {
      throw consistency_error("node " + std::to_string(id) + " has no signature");
    }
    ProofNode pn;
    pn.canonical = canonical_node_bytes(tree, id);
    pn.signature = it->second.signature;
    proof.nodes.push_back(std::move(pn));
  }
  return proof;
}

const char* reject_reason_name(RejectReason reason) {
  switch (reason) {
    case RejectReason::bad_signature:
      return "bad-signature";
    case RejectReason::broken_linkage:
      return "broken-linkage";
    case RejectReason::unsigned_result:
      return "unsigned-result";
  }
  return "unknown";
}

VerifyOutcome verify_proof(const VerificationProof& proof, const SignatureVerifier& verifier) {
  VerifyOutcome outcome;
  if (proof.nodes.empty()) throw format_error("proof has no nodes");

  auto reject = [&](RejectReason reason, std::uint64_t node_id, std::string detail) {
    outcome.accepted = false;
    outcome.reason = reason;
    outcome.node_id = node_id;
    outcome.detail = std::move(detail);
    return outcome;
  };

  // Signatures over the embedded bytes.
  std::vector<ParsedProofNode> parsed;
  parsed.reserve(proof.nodes.size());
  for (std::size_t i = 0; i < proof.nodes.size(); ++i) {
    const ProofNode& pn = proof.nodes[i];
    ParsedProofNode node = parse_canonical_node(pn.canonical, i == 0);
    if (!verifier.verify(sha256(pn.canonical), pn.signature)) {
      return reject(RejectReason::bad_signature, node.node_id,
                    "signature check failed for node " + std::to_string(node.node_id));
    }
    parsed.push_back(std::move(node));
  }

  // Parent-connected from the first node (the root).
  std::set<std::uint64_t> ids;
  std::set<std::uint64_t> reachable_children;
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    const ParsedProofNode& node = parsed[i];
    if (!ids.insert(node.node_id).second) {
      return reject(RejectReason::broken_linkage, node.node_id,
                    "duplicate node " + std::to_string(node.node_id));
    }
    if (i > 0 && !reachable_children.contains(node.node_id)) {
      return reject(RejectReason::broken_linkage, node.node_id,
                    "node " + std::to_string(node.node_id) + " is not a child of a prior node");
    }
    for (std::uint64_t child : node.children) reachable_children.insert(child);
  }

  // Every claimed result is a signed leaf.
  std::set<std::uint64_t> leaf_docs;
  for (const ParsedProofNode& node : parsed) {
    if (node.is_leaf) leaf_docs.insert(node.doc_id);
  }
  std::set<std::uint64_t> claimed;
  for (std::uint64_t doc_id : proof.result_doc_ids) {
    if (!claimed.insert(doc_id).second) {
      return reject(RejectReason::unsigned_result, doc_id,
                    "duplicate result doc " + std::to_string(doc_id));
    }
    if (!leaf_docs.contains(doc_id)) {
      return reject(RejectReason::unsigned_result, doc_id,
                    "result doc " + std::to_string(doc_id) + " is not a signed leaf");
    }
  }

  outcome.accepted = true;
  outcome.detail = "ok";
  return outcome;
}

}  // namespace opus
