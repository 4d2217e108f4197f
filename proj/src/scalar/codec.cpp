#include "crm/scalar/codec.hpp"

#include <algorithm>
#include <string_view>

#include "crm/coding/byte_io.hpp"
#include "crm/error.hpp"
#include "crm/scalar/trials.hpp"

namespace crm::scalar {

namespace {

std::vector<double> group_weights(std::span<const double> masses, std::uint32_t groups, unsigned low_bits) {
  std::vector<double> w(groups + 1, 0.0);
  for (std::size_t i = 0; i < masses.size(); ++i) w[i >> low_bits] += masses[i];
  w[groups] = kEscapeMass;
  return w;
}

void encode_literal(coding::RangeEncoder& enc, std::int64_t k) {
  const auto u = static_cast<std::uint64_t>(k);
  enc.encode_bits(static_cast<std::uint32_t>(u >> 32), 32);
  enc.encode_bits(static_cast<std::uint32_t>(u), 32);
}

std::int64_t decode_literal(coding::RangeDecoder& dec) {
  const std::uint64_t hi = dec.decode_bits(32);
  const std::uint64_t lo = dec.decode_bits(32);
  return static_cast<std::int64_t>(hi << 32 | lo);
}

void require_millisecond_bins(const ScalarCoder& coder) {
  if (coder.distribution().delta() != kOutcomeResolution)
    throw std::invalid_argument("trial codec needs a bin width of 0.001 s");
}

}  // namespace

ScalarCoder::ScalarCoder(const ScalarModel& model)
    : dist_(model),
      high_(coding::StaticFrequencyModel::uniform(1)),
      groups_(static_cast<std::uint32_t>((dist_.bin_count() + (1u << kLowBits) - 1) >> kLowBits)) {
  const auto w = group_weights(dist_.masses(), groups_, kLowBits);
  high_ = coding::StaticFrequencyModel::from_weights(w);
}

coding::StaticFrequencyModel& ScalarCoder::group_model(std::uint32_t group) {
  auto it = low_.find(group);
  if (it != low_.end()) return it->second;
  const std::size_t begin = static_cast<std::size_t>(group) << kLowBits;
  const std::size_t end = std::min(dist_.bin_count(), begin + (std::size_t{1} << kLowBits));
  const auto masses = dist_.masses().subspan(begin, end - begin);
  return low_.emplace(group, coding::StaticFrequencyModel::from_weights(masses)).first->second;
}

void ScalarCoder::encode(coding::RangeEncoder& enc, std::int64_t k) {
  const auto bin = dist_.bin_index(k);
  if (!bin) {
    enc.encode_symbol(high_, groups_);
    encode_literal(enc, k);
    return;
  }
  const auto group = static_cast<std::uint32_t>(*bin >> kLowBits);
  enc.encode_symbol(high_, group);
  auto& low = group_model(group);
  enc.encode_symbol(low, static_cast<std::uint32_t>(*bin & ((1u << kLowBits) - 1)));
}

std::int64_t ScalarCoder::decode(coding::RangeDecoder& dec) {
  const std::uint32_t group = dec.decode_symbol(high_);
  if (group == groups_) {
    const std::int64_t k = decode_literal(dec);
    if (dist_.bin_index(k)) throw DecodeError("escaped outcome lies inside the support");
    return k;
  }
  auto& low = group_model(group);
  const std::uint32_t offset = dec.decode_symbol(low);
  return dist_.first_bin() + static_cast<std::int64_t>((static_cast<std::size_t>(group) << kLowBits) + offset);
}

std::vector<std::uint8_t> compress_trials(std::span<const std::uint8_t> file, const ScalarModel& model) {
  ScalarCoder coder(model);
  require_millisecond_bins(coder);
  const std::string_view text(reinterpret_cast<const char*>(file.data()), file.size());
  if (!text.starts_with("CRMTRIALS 1\n")) throw FormatError("not a CRMTRIALS 1 file");

  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) throw FormatError("trial file must end with a newline");
    if (pos > 0 && text.substr(pos, eol - pos).find('=') == std::string_view::npos) break;
    pos = eol + 1;
  }
  const std::string_view prefix = text.substr(0, pos);
  std::vector<std::int64_t> outcomes;
  while (pos < text.size()) {
    const auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) throw FormatError("trial file must end with a newline");
    std::int64_t ms = 0;
    if (!parse_millis(text.substr(pos, eol - pos), ms)) throw FormatError("outcome is not a canonical millisecond value");
    outcomes.push_back(ms);
    pos = eol + 1;
  }

  coding::RangeEncoder enc;
  for (auto ms : outcomes) coder.encode(enc, ms);
  coding::ByteWriter w;
  w.put_string(prefix);
  w.put_varint(outcomes.size());
  w.put_bytes(enc.finish());
  return std::move(w).take();
}

std::vector<std::uint8_t> decompress_trials(std::span<const std::uint8_t> stream, const ScalarModel& model) {
  ScalarCoder coder(model);
  require_millisecond_bins(coder);
  coding::ByteReader r(stream);
  std::string text = r.get_string();
  if (!text.starts_with("CRMTRIALS 1\n")) throw DecodeError("stored trial header is invalid");
  const std::uint64_t count = r.get_varint();
  const auto body = r.get_bytes(r.remaining());
  // No symbol is coded with probability above 65535/65536, so each outcome
  // takes more than 1/65536 of a bit.
  if (count > 65536ull * 8 * (body.size() + 1)) throw DecodeError("implausible outcome count");
  coding::RangeDecoder dec(body);
  for (std::uint64_t i = 0; i < count; ++i) text += format_millis(coder.decode(dec)) + "\n";
  dec.finish();
  return {text.begin(), text.end()};
}

}  // namespace crm::scalar
