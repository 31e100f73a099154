#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "opus/error.hpp"

namespace opus::io {

// Big-endian primitives for the OPUS-* container formats. All multi-byte
// integers and IEEE-754 doubles are stored big-endian; layouts are normative
// because the verification module signs the encoded bytes.

inline void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>((v >> shift) & 0xff));
  }
}

inline void put_f64(std::vector<std::uint8_t>& out, double v) {
  put_u64(out, std::bit_cast<std::uint64_t>(v));
}

inline void put_u8(std::vector<std::uint8_t>& out, std::uint8_t v) { out.push_back(v); }

inline void put_bytes(std::vector<std::uint8_t>& out, std::span<const std::uint8_t> bytes) {
  out.insert(out.end(), bytes.begin(), bytes.end());
}

// Bounds-checked cursor over an in-memory buffer. Any overrun raises a
// format error; container parsers must consume the buffer exactly.
class Reader {
 public:
  Reader(std::span<const std::uint8_t> data, std::string name)
      : data_(data), name_(std::move(name)) {}

  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | data_[pos_ + i];
    pos_ += 8;
    return v;
  }

  double f64() { return std::bit_cast<double>(u64()); }

  std::uint8_t u8() {
    need(1);
    return data_[pos_++];
  }

  // Element count whose payload occupies at least `unit_bytes` each; any
  // count the remaining buffer cannot hold is malformed. Keeps corrupted
  // length fields from driving allocations.
  std::uint64_t count(std::size_t unit_bytes) {
    std::uint64_t v = u64();
    if (unit_bytes > 0 && v > remaining() / unit_bytes) {
      throw format_error(name_ + ": count exceeds payload");
    }
    return v;
  }

  std::vector<std::uint8_t> bytes(std::size_t n) {
    need(n);
    std::vector<std::uint8_t> out(data_.begin() + pos_, data_.begin() + pos_ + n);
    pos_ += n;
    return out;
  }

  void expect_magic(std::string_view magic) {
    need(magic.size());
    if (std::memcmp(data_.data() + pos_, magic.data(), magic.size()) != 0) {
      throw format_error(name_ + ": bad magic, expected " + std::string(magic));
    }
    pos_ += magic.size();
  }

  std::size_t remaining() const { return data_.size() - pos_; }

  void expect_end() const {
    if (pos_ != data_.size()) throw format_error(name_ + ": trailing bytes");
  }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) throw format_error(name_ + ": truncated");
  }

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
  std::string name_;
};

std::vector<std::uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, std::span<const std::uint8_t> data);

}  // namespace opus::io
