#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "opus/hit.hpp"

namespace opus {

using Digest = std::array<std::uint8_t, 32>;

Digest sha256(std::span<const std::uint8_t> data);

// Signature scheme interface; the default is Ed25519 over the SHA-256
// digest of a node's canonical bytes.
class TreeSigner {
 public:
  virtual ~TreeSigner() = default;
  virtual std::vector<std::uint8_t> sign(const Digest& digest) = 0;
};

class SignatureVerifier {
 public:
  virtual ~SignatureVerifier() = default;
  virtual bool verify(const Digest& digest, std::span<const std::uint8_t> signature) const = 0;
};

class Ed25519Signer : public TreeSigner {
 public:
  // Deterministic keypair from a 32-byte seed derived from `seed`.
  explicit Ed25519Signer(std::uint64_t seed);
  std::vector<std::uint8_t> sign(const Digest& digest) override;
  std::array<std::uint8_t, 32> public_key() const { return public_key_; }

 private:
  std::array<std::uint8_t, 32> public_key_{};
  std::array<std::uint8_t, 64> secret_key_{};
};

class Ed25519Verifier : public SignatureVerifier {
 public:
  explicit Ed25519Verifier(const std::array<std::uint8_t, 32>& public_key)
      : public_key_(public_key) {}
  bool verify(const Digest& digest, std::span<const std::uint8_t> signature) const override;

 private:
  std::array<std::uint8_t, 32> public_key_;
};

struct NodeSignature {
  std::uint64_t node_id = 0;
  Digest digest{};
  std::vector<std::uint8_t> signature;
};

// Canonical byte encoding of an encrypted node: node_id, child count,
// sorted child ids, leaf marker and doc id, both encrypted parts as
// big-endian doubles. The root additionally embeds the tree epoch. Owner
// and verifier hash exactly these bytes.
std::vector<std::uint8_t> canonical_node_bytes(const HitTree& tree, std::uint64_t node_id);

using SignatureMap = std::map<std::uint64_t, NodeSignature>;

// Signs every node of the encrypted tree.
SignatureMap sign_tree(const HitTree& tree, TreeSigner& signer);

struct ProofNode {
  std::vector<std::uint8_t> canonical;  // embedded verbatim, hashed verbatim
  std::vector<std::uint8_t> signature;
};

struct VerificationProof {
  std::vector<std::uint64_t> result_doc_ids;
  std::vector<ProofNode> nodes;  // first-visit order, root first
};

// Bundles the nodes entered by the search plus the returned leaves. For
// results that carry no visited path (linear mode), the ancestor chain of
// every returned leaf is included instead.
VerificationProof extract_proof(const HitTree& tree, const SignatureMap& signatures,
                                const SearchResult& result);

enum class RejectReason { bad_signature, broken_linkage, unsigned_result };

struct VerifyOutcome {
  bool accepted = false;
  RejectReason reason = RejectReason::bad_signature;
  std::uint64_t node_id = 0;  // first failing node (when applicable)
  std::string detail;
};

const char* reject_reason_name(RejectReason reason);

// Recomputes every digest from the embedded canonical bytes, checks every
// signature, checks that the path is parent-connected from the first node,
// and that every claimed result is a signed leaf. Malformed canonical
// bytes raise a format error.
VerifyOutcome verify_proof(const VerificationProof& proof, const SignatureVerifier& verifier);

struct ParsedProofNode {
  std::uint64_t node_id = 0;
  std::vector<std::uint64_t> children;
  bool is_leaf = false;
  std::uint64_t doc_id = 0;
};

ParsedProofNode parse_canonical_node(std::span<const std::uint8_t> bytes, bool is_root);

}  // namespace opus
