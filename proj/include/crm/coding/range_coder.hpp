#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "crm/coding/frequency_model.hpp"

namespace crm::coding {

// 32-bit range coder with carry propagation (LZMA-style byte output).
//
// The always-zero leading byte is not emitted and termination writes the
// four bytes of `low`, so a stream of n renormalisations is exactly n + 4
// bytes long. The decoder uses that to check the end of stream: after the
// last symbol every byte must have been consumed and the residual code must
// be zero.
class RangeEncoder {
 public:
  void encode(SymbolRange r);
  // Equiprobable value of `nbits` bits (any width up to 32).
  void encode_bits(std::uint32_t value, unsigned nbits);

  template <FrequencyModel M>
  void encode_symbol(M& model, std::uint32_t symbol) {
    encode(model.range(symbol));
    model.update(symbol);
  }

  // Flushes and returns the byte stream. The encoder must not be reused.
  std::vector<std::uint8_t> finish();

 private:
  void shift_low();

  std::uint64_t low_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
  std::uint8_t cache_ = 0;
  std::uint64_t cache_size_ = 1;
  bool leading_ = true;
  std::vector<std::uint8_t> out_;
};

class RangeDecoder {
 public:
  explicit RangeDecoder(std::span<const std::uint8_t> bytes);

  // Slot target for a model with the given total; throws DecodeError when
  // the code points outside every symbol.
  std::uint32_t decode_target(std::uint32_t total);
  // Must follow decode_target with the same total.
  void consume(SymbolRange r);
  std::uint32_t decode_bits(unsigned nbits);

  template <FrequencyModel M>
  std::uint32_t decode_symbol(M& model) {
    const std::uint32_t symbol = model.find(decode_target(model.total()));
    consume(model.range(symbol));
    model.update(symbol);
    return symbol;
  }

  // End-of-stream sentinel: throws DecodeError unless all bytes were read
  // and the residual code is zero.
  void finish() const;

 private:
  std::uint8_t next_byte();

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
  std::uint32_t code_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
  std::uint32_t step_ = 0;
};

}  // namespace crm::coding
