#include "crm/coding/range_coder.hpp"

#include <cassert>
#include <stdexcept>

#include "crm/error.hpp"

namespace crm::coding {

namespace {
constexpr std::uint32_t kTop = 1u << 24;
}

void RangeEncoder::encode(SymbolRange r) {
  if (r.freq == 0 || r.total == 0 || r.total > kMaxModelTotal || r.low + r.freq > r.total)
    throw std::invalid_argument("invalid symbol range");
  const std::uint32_t step = range_ / r.total;
  low_ += static_cast<std::uint64_t>(step) * r.low;
  range_ = step * r.freq;
  while (range_ < kTop) {
    range_ <<= 8;
    shift_low();
  }
}

void RangeEncoder::encode_bits(std::uint32_t value, unsigned nbits) {
  if (nbits > 32) throw std::invalid_argument("at most 32 bits");
  if (nbits < 32 && (value >> nbits) != 0) throw std::out_of_range("value wider than nbits");
  while (nbits > 0) {
    const unsigned chunk = nbits > 16 ? 16 : nbits;
    nbits -= chunk;
    const std::uint32_t part = (value >> nbits) & ((1u << chunk) - 1);
    encode({part, 1, 1u << chunk});
  }
}

void RangeEncoder::shift_low() {
  if (static_cast<std::uint32_t>(low_) < 0xFF000000u || (low_ >> 32) != 0) {
    const auto carry = static_cast<std::uint8_t>(low_ >> 32);
    std::uint8_t pending = cache_;
    do {
      const auto byte = static_cast<std::uint8_t>(pending + carry);
      if (leading_) {
        assert(byte == 0);
        leading_ = false;
      } else {
        out_.push_back(byte);
      }
      pending = 0xFF;
    } while (--cache_size_ != 0);
    cache_ = static_cast<std::uint8_t>(low_ >> 24);
  }
  ++cache_size_;
  low_ = (low_ & 0x00FFFFFFu) << 8;
}

std::vector<std::uint8_t> RangeEncoder::finish() {
  for (int i = 0; i < 5; ++i) shift_low();
  return std::move(out_);
}

RangeDecoder::RangeDecoder(std::span<const std::uint8_t> bytes) : in_(bytes) {
  for (int i = 0; i < 4; ++i) code_ = (code_ << 8) | next_byte();
}

std::uint8_t RangeDecoder::next_byte() {
  if (pos_ >= in_.size()) throw DecodeError("range-coded stream truncated");
  return in_[pos_++];
}

std::uint32_t RangeDecoder::decode_target(std::uint32_t total) {
  if (total == 0 || total > kMaxModelTotal) throw std::invalid_argument("invalid model total");
  step_ = range_ / total;
  const std::uint32_t target = code_ / step_;
  if (target >= total) throw DecodeError("range-coded stream corrupt");
  return target;
}

void RangeDecoder::consume(SymbolRange r) {
  code_ -= step_ * r.low;
  range_ = step_ * r.freq;
  while (range_ < kTop) {
    range_ <<= 8;
    code_ = (code_ << 8) | next_byte();
  }
}

std::uint32_t RangeDecoder::decode_bits(unsigned nbits) {
  if (nbits > 32) throw std::invalid_argument("at most 32 bits");
  std::uint32_t value = 0;
  while (nbits > 0) {
    const unsigned chunk = nbits > 16 ? 16 : nbits;
    nbits -= chunk;
    const std::uint32_t part = decode_target(1u << chunk);
    consume({part, 1, 1u << chunk});
    value = (value << chunk) | part;
  }
  return value;
}

void RangeDecoder::finish() const {
  if (pos_ != in_.size() || code_ != 0) throw DecodeError("range-coded stream end sentinel mismatch");
}

}  // namespace crm::coding
