#include "crm/coding/byte_io.hpp"

#include <bit>
#include <string>

namespace crm::coding {

void ByteWriter::put_f64(double v) { put_u64(std::bit_cast<std::uint64_t>(v)); }

void ByteWriter::put_varint(std::uint64_t v) {
  while (v >= 0x80) {
    out_.push_back(static_cast<std::uint8_t>(v | 0x80));
    v >>= 7;
  }
  out_.push_back(static_cast<std::uint8_t>(v));
}

double ByteReader::get_f64() { return std::bit_cast<double>(get_u64()); }

std::uint64_t ByteReader::get_varint() {
  std::uint64_t v = 0;
  for (int shift = 0; shift < 64; shift += 7) {
    const std::uint8_t b = get_u8();
    v |= static_cast<std::uint64_t>(b & 0x7F) << shift;
    if ((b & 0x80) == 0) {
      // Reject non-minimal encodings so every value has exactly one form.
      if (b == 0 && shift != 0) throw DecodeError("non-canonical varint");
      return v;
    }
  }
  throw DecodeError("varint overflow");
}

std::span<const std::uint8_t> ByteReader::get_bytes(std::size_t n) {
  if (n > remaining()) throw DecodeError("stream truncated");
  auto out = data_.subspan(pos_, n);
  pos_ += n;
  return out;
}

std::string ByteReader::get_string() {
  auto b = get_block();
  return std::string(b.begin(), b.end());
}

void ByteReader::expect_end(const char* what) const {
  if (!at_end()) throw DecodeError(std::string("trailing bytes after ") + what);
}

std::uint64_t ByteReader::get_be(int width) {
  if (static_cast<std::size_t>(width) > remaining()) throw DecodeError("stream truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) v = (v << 8) | data_[pos_++];
  return v;
}

std::size_t ByteReader::checked_size(std::uint64_t n) const {
  if (n > remaining()) throw DecodeError("block length exceeds stream");
  return static_cast<std::size_t>(n);
}

}  // namespace crm::coding
