#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crm/error.hpp"

namespace crm::coding {

using Bytes = std::vector<std::uint8_t>;

// Big-endian writer used by every container and stream header.
class ByteWriter {
 public:
  void put_u8(std::uint8_t v) { out_.push_back(v); }
  void put_u16(std::uint16_t v) { put_be(v, 2); }
  void put_u32(std::uint32_t v) { put_be(v, 4); }
  void put_u64(std::uint64_t v) { put_be(v, 8); }
  void put_i32(std::int32_t v) { put_u32(static_cast<std::uint32_t>(v)); }
  void put_f64(double v);
  // LEB128-style unsigned varint.
  void put_varint(std::uint64_t v);
  void put_bytes(std::span<const std::uint8_t> bytes) {
    out_.insert(out_.end(), bytes.begin(), bytes.end());
  }
  // Varint length followed by the bytes.
  void put_block(std::span<const std::uint8_t> bytes) {
    put_varint(bytes.size());
    put_bytes(bytes);
  }
  void put_string(std::string_view s) {
    put_varint(s.size());
    out_.insert(out_.end(), s.begin(), s.end());
  }

  [[nodiscard]] std::size_t size() const { return out_.size(); }
  [[nodiscard]] const Bytes& bytes() const& { return out_; }
  [[nodiscard]] Bytes take() && { return std::move(out_); }

 private:
  void put_be(std::uint64_t v, int width) {
    for (int i = width - 1; i >= 0; --i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  Bytes out_;
};

// Bounds-checked reader; every overrun throws DecodeError.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint8_t get_u8() { return static_cast<std::uint8_t>(get_be(1)); }
  std::uint16_t get_u16() { return static_cast<std::uint16_t>(get_be(2)); }
  std::uint32_t get_u32() { return static_cast<std::uint32_t>(get_be(4)); }
  std::uint64_t get_u64() { return get_be(8); }
  std::int32_t get_i32() { return static_cast<std::int32_t>(get_u32()); }
  double get_f64();
  std::uint64_t get_varint();
  std::span<const std::uint8_t> get_bytes(std::size_t n);
  std::span<const std::uint8_t> get_block() { return get_bytes(checked_size(get_varint())); }
  std::string get_string();

  [[nodiscard]] std::size_t position() const { return pos_; }
  [[nodiscard]] std::size_t remaining() const { return data_.size() - pos_; }
  [[nodiscard]] bool at_end() const { return pos_ == data_.size(); }
  // Throws unless the whole input was consumed.
  void expect_end(const char* what) const;

 private:
  std::uint64_t get_be(int width);
  std::size_t checked_size(std::uint64_t n) const;

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

}  // namespace crm::coding
