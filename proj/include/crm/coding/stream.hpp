#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "crm/coding/codelength.hpp"
#include "crm/coding/frequency_model.hpp"
#include "crm/coding/range_coder.hpp"

namespace crm::coding {

// Encoded bytes, most-significant bit first within each byte.
struct Bitstream {
  std::vector<std::uint8_t> bytes;
  std::uint64_t bit_length = 0;

  static Bitstream from_bytes(std::vector<std::uint8_t> b) {
    const auto n = b.size();
    return {std::move(b), 8 * static_cast<std::uint64_t>(n)};
  }
  [[nodiscard]] bool valid() const { return bit_length <= 8 * static_cast<std::uint64_t>(bytes.size()); }
};

// Codes `symbols` with a private copy of `model`; callers keep the initial
// state for decoding.
template <FrequencyModel M>
Bitstream encode_stream(std::span<const std::uint32_t> symbols, M model) {
  RangeEncoder enc;
  for (std::uint32_t s : symbols) {
    if (s >= model.alphabet_size()) throw std::out_of_range("symbol outside alphabet");
    enc.encode_symbol(model, s);
  }
  return Bitstream::from_bytes(enc.finish());
}

template <FrequencyModel M>
std::vector<std::uint32_t> decode_stream(const Bitstream& bits, M model, std::size_t count) {
  RangeDecoder dec(bits.bytes);
  std::vector<std::uint32_t> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(dec.decode_symbol(model));
  dec.finish();
  return out;
}

// Sum of -log2 p_model(symbol | prefix) along the sequence.
template <FrequencyModel M>
CodeLengthBits ideal_codelength(std::span<const std::uint32_t> symbols, M model) {
  double bits = 0.0;
  for (std::uint32_t s : symbols) {
    const SymbolRange r = model.range(s);
    bits += std::log2(static_cast<double>(r.total) / r.freq);
    model.update(s);
  }
  return CodeLengthBits(bits);
}

}  // namespace crm::coding
