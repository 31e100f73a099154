#include "opus/opu.hpp"

#include <cctype>
#include <cmath>
#include <cstring>

#include "opus/error.hpp"

namespace opus {

const char kDsbSymbols[21] = "!@#$%&*()-_+=/\\.,'\":";

void OpuParams::validate() const {
  if (letter_blocks < 1) throw validation_error("letter_blocks must be >= 1");
  if (strength <= 1.0) throw validation_error("infection strength must be > 1");
  if (spread >= letter_blocks) throw validation_error("infection spread must be < letter_blocks");
}

std::vector<PositionedChar> decompose(const std::string& keyword) {
  if (keyword.empty()) throw validation_error("empty keyword");
  std::vector<PositionedChar> out;
  out.reserve(keyword.size());
  std::size_t pos = 1;
  for (char ch : keyword) {
    char c = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    out.push_back({c, pos++});
  }
  return out;
}

namespace {

// DSB slot (0-based within the block) for a digit or known symbol, or -1.
int dsb_slot(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  const char* p = std::strchr(kDsbSymbols, c);
  if (p != nullptr && *p != '\0') return 10 + static_cast<int>(p - kDsbSymbols);
  return -1;
}

}  // namespace

OpuVector encode(const std::vector<PositionedChar>& chars, const OpuParams& params,
                 std::vector<char>* skipped) {
  params.validate();
  OpuVector v;
  v.weights.assign(params.dimension(), 0.0);
  const std::size_t dsb_base = params.letter_blocks * 26;
  for (const PositionedChar& pc : chars) {
    if (pc.pos > params.letter_blocks) continue;  // keyword tail is cast off
    v.source_len = std::max(v.source_len, pc.pos);
    if (pc.ch >= 'a' && pc.ch <= 'z') {
      std::size_t rank = static_cast<std::size_t>(pc.ch - 'a');  // 0-based
      v.weights[(pc.pos - 1) * 26 + rank] = 1.0;
    } else if (int slot = dsb_slot(pc.ch); slot >= 0) {
      v.weights[dsb_base + static_cast<std::size_t>(slot)] = 1.0;
    } else if (skipped != nullptr) {
      skipped->push_back(pc.ch);
    }
  }
  return v;
}

OpuVector infect(const OpuVector& v, const OpuParams& params) {
  params.validate();
  if (v.weights.size() != params.dimension()) {
    throw dimension_error("vector length does not match params");
  }
  OpuVector out = v;
  const std::size_t blocks = params.letter_blocks;
  for (std::size_t b = 0; b < blocks; ++b) {
    for (std::size_t letter = 0; letter < 26; ++letter) {
      if (v.weights[b * 26 + letter] == 0.0) continue;
      const double source = v.weights[b * 26 + letter];
      for (std::size_t j = 1; j <= params.spread; ++j) {
        const double delta = source / std::pow(params.strength, static_cast<double>(j));
        if (b >= j) out.weights[(b - j) * 26 + letter] += delta;
        if (b + j < blocks) out.weights[(b + j) * 26 + letter] += delta;
      }
    }
  }
  return out;
}

OpuVector opu_encode(const std::string& keyword, const OpuParams& params) {
  return infect(encode(decompose(keyword), params), params);
}

double opu_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw dimension_error("vector length mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

double opu_distance(const OpuVector& a, const OpuVector& b) {
  return opu_distance(a.weights, b.weights);
}

}  // namespace opus
