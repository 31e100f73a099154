#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace opus {

// Order-preserved uni-gram vectorization. A keyword maps to a real vector
// of `letter_blocks` 26-slot letter blocks followed by a 30-slot digit and
// symbol block (10 digits + 20 symbols). The i-th character of the keyword
// addresses the i-th letter block; infection then shares each set bit's
// weight with the same letter's slots in nearby blocks, decaying as
// 1/strength^j for block offset j up to `spread`.
struct OpuParams {
  std::size_t letter_blocks = 20;  // max representable character positions
  double strength = 2.0;           // infection decay base, > 1
  std::size_t spread = 2;          // infection reach in blocks, < letter_blocks

  std::size_t dimension() const { return letter_blocks * 26 + 30; }
  void validate() const;
};

struct OpuVector {
  std::vector<double> weights;
  std::size_t source_len = 0;  // characters consumed from the keyword

  std::size_t size() const { return weights.size(); }
};

struct PositionedChar {
  char ch;
  std::size_t pos;  // 1-based position in the keyword
};

// The 20 symbols tracked by the digit-and-symbol block, in slot order
// (slots 11..30; digits '0'..'9' take slots 1..10).
extern const char kDsbSymbols[21];

// Splits a keyword into lowercased (character, position) pairs. Characters
// beyond position letter_blocks are dropped by encode, not here.
std::vector<PositionedChar> decompose(const std::string& keyword);

// Binary encoding: letter c at position p sets slot (p-1)*26 + rank(c)
// (1-based, rank('a')=1). Digits and known symbols set their DSB presence
// slot. Other characters are skipped and reported through `skipped`.
OpuVector encode(const std::vector<PositionedChar>& chars, const OpuParams& params,
                 std::vector<char>* skipped = nullptr);

// Applies the infection operator: a fixed linear map that adds
// 1/strength^j of every originally set letter-block bit to the same
// letter's slot j blocks away, for j = 1..spread, within bounds. The DSB
// is untouched.
OpuVector infect(const OpuVector& v, const OpuParams& params);

// decompose + encode + infect.
OpuVector opu_encode(const std::string& keyword, const OpuParams& params);

// Euclidean distance between equal-length vectors.
double opu_distance(const OpuVector& a, const OpuVector& b);
double opu_distance(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace opus
