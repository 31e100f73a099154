#pragma once

#include <array>
#include <string>

#include "opus/hit.hpp"
#include "opus/secure_knn.hpp"
#include "opus/verify.hpp"

namespace opus {

// Versioned binary containers. All integers and doubles are big-endian;
// matrices are row-major. Round-trips are byte-exact.

inline constexpr std::string_view kKeyMagic = "OPUS-KEY/1\n";
inline constexpr std::string_view kHitMagic = "OPUS-HIT/1\n";
inline constexpr std::string_view kTrapdoorMagic = "OPUS-TRAP/1\n";
inline constexpr std::string_view kProofMagic = "OPUS-PROOF/1\n";
inline constexpr std::string_view kPublicKeyMagic = "OPUS-PUB/1\n";

std::vector<std::uint8_t> encode_key(const SecretKey& key);
SecretKey decode_key(std::span<const std::uint8_t> data);
void write_key(const SecretKey& key, const std::string& path);
SecretKey read_key(const std::string& path);

struct SignedIndex {
  HitTree tree;  // encrypted form
  SignatureMap signatures;
};

std::vector<std::uint8_t> encode_index(const SignedIndex& index);
SignedIndex decode_index(std::span<const std::uint8_t> data);
void write_index(const SignedIndex& index, const std::string& path);
SignedIndex read_index(const std::string& path);

std::vector<std::uint8_t> encode_trapdoor(const Trapdoor& trapdoor);
Trapdoor decode_trapdoor(std::span<const std::uint8_t> data);
void write_trapdoor(const Trapdoor& trapdoor, const std::string& path);
Trapdoor read_trapdoor(const std::string& path);

std::vector<std::uint8_t> encode_proof(const VerificationProof& proof);
VerificationProof decode_proof(std::span<const std::uint8_t> data);
void write_proof(const VerificationProof& proof, const std::string& path);
VerificationProof read_proof(const std::string& path);

void write_public_key(const std::array<std::uint8_t, 32>& key, const std::string& path);
std::array<std::uint8_t, 32> read_public_key(const std::string& path);

}  // namespace opus
