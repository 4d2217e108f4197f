#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "crm/coding/byte_io.hpp"
#include "crm/coding/codelength.hpp"
#include "crm/coding/frequency_model.hpp"
#include "crm/coding/gaussian.hpp"
#include "crm/coding/range_coder.hpp"
#include "crm/coding/stream.hpp"
#include "crm/error.hpp"

using namespace crm::coding;

TEST_CASE("shannon codelength of simple probabilities") {
  CHECK(shannon_codelength(0.5).bits() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(shannon_codelength(1.0).bits() == 0.0);
  CHECK(shannon_codelength(1.0 / 256).bits() == doctest::Approx(8.0).epsilon(1e-12));
  CHECK_THROWS_AS((void)shannon_codelength(0.0), std::domain_error);
  CHECK_THROWS_AS((void)shannon_codelength(-0.1), std::domain_error);
  CHECK_THROWS_AS((void)shannon_codelength(1.0000001), std::domain_error);
}

TEST_CASE("codelength values are non-negative and finite") {
  CHECK_THROWS_AS((void)CodeLengthBits(-1.0), std::domain_error);
  CHECK_THROWS_AS((void)CodeLengthBits(INFINITY), std::domain_error);
  // Addition is order independent within tolerance.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  std::vector<double> xs(1000);
  for (auto& x : xs) x = u(rng);
  CodeLengthBits fwd, rev;
  for (double x : xs) fwd += CodeLengthBits(x);
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) rev += CodeLengthBits(*it);
  CHECK(std::abs(fwd.bits() - rev.bits()) <= 1e-9 * fwd.bits());
}

TEST_CASE("kraft audit detects complete and over-full codes") {
  for (int n : {1, 4, 10}) {
    std::vector<CodeLengthBits> complete(std::size_t{1} << n, CodeLengthBits(n));
    CHECK(kraft_audit(complete) == doctest::Approx(1.0).epsilon(1e-12));
    std::vector<CodeLengthBits> overfull(std::size_t{1} << n, CodeLengthBits(n - 1));
    CHECK(kraft_audit(overfull) == doctest::Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("symbol distribution normalisation") {
  SymbolDistribution d({0.25, 0.25, 0.5});
  CHECK(d.codelength(2).bits() == doctest::Approx(1.0));
  CHECK_THROWS_AS(SymbolDistribution({0.5, 0.4}), std::invalid_argument);
  SymbolDistribution z({0.0, 1.0});
  CHECK_THROWS_AS((void)z.codelength(0), std::domain_error);
}

TEST_CASE("quantized frequencies keep every symbol positive and hit the total") {
  std::vector<double> w{0.0, 1e-30, 0.3, 0.7};
  auto f = quantize_frequencies(w, 1u << 16);
  CHECK(std::accumulate(f.begin(), f.end(), 0u) == (1u << 16));
  for (auto x : f) CHECK(x >= 1);
  CHECK(f[3] > f[2]);
}

TEST_CASE("uniform 256-ary static model spends 8 bits per symbol plus bounded overhead") {
  std::mt19937_64 rng(1);
  std::vector<std::uint32_t> s(1000);
  for (auto& x : s) x = static_cast<std::uint32_t>(rng() & 0xFF);
  auto bs = encode_stream(std::span<const std::uint32_t>(s), StaticFrequencyModel::uniform(256));
  CHECK(bs.bit_length >= 8000);
  CHECK(bs.bit_length <= 8064);
  CHECK(decode_stream(bs, StaticFrequencyModel::uniform(256), s.size()) == s);
}

TEST_CASE("empty sequence costs only termination") {
  auto bs = encode_stream(std::span<const std::uint32_t>(), AdaptiveFrequencyModel(256));
  CHECK(bs.bit_length <= 64);
  CHECK(decode_stream(bs, AdaptiveFrequencyModel(256), 0).empty());
}

// Independent simulation of the adaptive rule: counts start at 1, +32 per
// symbol, halve (rounding up) once the total exceeds 2^16.
double adaptive_oracle_bits(const std::vector<std::uint32_t>& s, std::uint32_t alphabet) {
  std::vector<double> counts(alphabet, 1.0);
  double bits = 0.0;
  for (auto x : s) {
    double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    bits += -std::log2(counts[x] / total);
    counts[x] += 32;
    if (total + 32 > 65536) {
      for (auto& c : counts) c = std::ceil(c / 2);
    }
  }
  return bits;
}

TEST_CASE("long run of one symbol under a binary adaptive model") {
  std::vector<std::uint32_t> s(4096, 0);
  const double oracle = adaptive_oracle_bits(s, 2);
  const auto ideal = ideal_codelength(std::span<const std::uint32_t>(s), AdaptiveFrequencyModel(2));
  CHECK(ideal.bits() == doctest::Approx(oracle).epsilon(1e-9));
  auto bs = encode_stream(std::span<const std::uint32_t>(s), AdaptiveFrequencyModel(2));
  CHECK(bs.bit_length < 200);
  CHECK(bs.bit_length <= oracle + 64);
  CHECK(decode_stream(bs, AdaptiveFrequencyModel(2), s.size()) == s);
}

TEST_CASE("every single-symbol sequence round trips") {
  for (std::uint32_t sym = 0; sym < 256; ++sym) {
    std::vector<std::uint32_t> s{sym};
    auto bs = encode_stream(std::span<const std::uint32_t>(s), AdaptiveFrequencyModel(256));
    REQUIRE(decode_stream(bs, AdaptiveFrequencyModel(256), 1) == s);
  }
}

TEST_CASE("property: random sequences round trip within the codelength bound") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint32_t alphabet = 2 + static_cast<std::uint32_t>(rng() % 600);
    const std::size_t n = rng() % 5000;
    // Skewed source so adaptive models have something to learn.
    std::geometric_distribution<std::uint32_t> geo(0.02 + 0.5 * (rng() % 100) / 100.0);
    std::vector<std::uint32_t> s(n);
    for (auto& x : s) x = std::min(geo(rng), alphabet - 1);
    AdaptiveFrequencyModel model(alphabet);
    auto bs = encode_stream(std::span<const std::uint32_t>(s), model);
    REQUIRE(decode_stream(bs, model, n) == s);
    const double ideal = ideal_codelength(std::span<const std::uint32_t>(s), model).bits();
    CHECK(static_cast<double>(bs.bit_length) - ideal <= 64.0 + 0.001 * ideal);

    // Static model with random weights.
    std::vector<double> w(alphabet);
    for (auto& x : w) x = static_cast<double>(rng() % 1000);
    auto stat = StaticFrequencyModel::from_weights(w);
    auto bs2 = encode_stream(std::span<const std::uint32_t>(s), stat);
    REQUIRE(decode_stream(bs2, stat, n) == s);
    const double ideal2 = ideal_codelength(std::span<const std::uint32_t>(s), stat).bits();
    CHECK(static_cast<double>(bs2.bit_length) - ideal2 <= 64.0 + 0.001 * ideal2);
  }
}

TEST_CASE("encoder and decoder model states stay identical") {
  std::mt19937_64 rng(99);
  std::vector<std::uint32_t> s(3000);
  for (auto& x : s) x = static_cast<std::uint32_t>(rng() % 7);
  AdaptiveFrequencyModel enc_model(7), dec_model(7);
  RangeEncoder enc;
  std::vector<AdaptiveFrequencyModel> states;
  for (auto x : s) {
    enc.encode_symbol(enc_model, x);
    states.push_back(enc_model);
  }
  auto bytes = enc.finish();
  RangeDecoder dec(bytes);
  for (std::size_t i = 0; i < s.size(); ++i) {
    REQUIRE(dec.decode_symbol(dec_model) == s[i]);
    REQUIRE(dec_model == states[i]);
  }
  dec.finish();
}

TEST_CASE("adaptive model never loses a symbol and respects max_total") {
  AdaptiveFrequencyModel m(5);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20000; ++i) {
    const auto sym = static_cast<std::uint32_t>(rng() % 2);
    m.update(sym);
    REQUIRE(m.total() <= m.max_total());
  }
  for (auto c : m.counts()) CHECK(c >= 1);
  // find() agrees with a linear scan of the cumulative counts.
  for (std::uint32_t t = 0; t < m.total(); t += 7) {
    std::uint32_t cum = 0, expect = 0;
    for (std::uint32_t k = 0; k < m.alphabet_size(); ++k) {
      if (t < cum + m.counts()[k]) {
        expect = k;
        break;
      }
      cum += m.counts()[k];
    }
    REQUIRE(m.find(t) == expect);
  }
}

TEST_CASE("decoder rejects truncation, wrong counts and corruption") {
  std::mt19937_64 rng(5);
  std::vector<std::uint32_t> s(500);
  for (auto& x : s) x = static_cast<std::uint32_t>(rng() % 40);
  auto bs = encode_stream(std::span<const std::uint32_t>(s), AdaptiveFrequencyModel(40));

  auto cut = bs;
  cut.bytes.pop_back();
  CHECK_THROWS_AS(decode_stream(cut, AdaptiveFrequencyModel(40), s.size()), crm::DecodeError);
  CHECK_THROWS_AS(decode_stream(bs, AdaptiveFrequencyModel(40), s.size() + 50), crm::DecodeError);
  CHECK_THROWS_AS(decode_stream(bs, AdaptiveFrequencyModel(40), s.size() - 50), crm::DecodeError);

  // Every single-bit flip either fails to decode or changes the output.
  for (std::size_t bit = 0; bit < bs.bytes.size() * 8; ++bit) {
    auto m = bs;
    m.bytes[bit / 8] ^= static_cast<std::uint8_t>(0x80 >> (bit % 8));
    bool detected = false;
    try {
      detected = decode_stream(m, AdaptiveFrequencyModel(40), s.size()) != s;
    } catch (const crm::DecodeError&) {
      detected = true;
    }
    REQUIRE(detected);
  }
}

TEST_CASE("raw bit fields round trip") {
  RangeEncoder enc;
  enc.encode_bits(0xDEADBEEF, 32);
  enc.encode_bits(5, 3);
  enc.encode_bits(0, 0);
  enc.encode_bits(0x1FFFF, 17);
  auto bytes = enc.finish();
  RangeDecoder dec(bytes);
  CHECK(dec.decode_bits(32) == 0xDEADBEEF);
  CHECK(dec.decode_bits(3) == 5);
  CHECK(dec.decode_bits(0) == 0);
  CHECK(dec.decode_bits(17) == 0x1FFFF);
  dec.finish();
  CHECK(bytes.size() <= 4 + 7 + 1);
}

TEST_CASE("byte reader and writer") {
  ByteWriter w;
  w.put_u8(1);
  w.put_u32(0x01020304);
  w.put_u64(0x1122334455667788ull);
  w.put_varint(300);
  w.put_string("abc");
  w.put_f64(2.5);
  auto bytes = std::move(w).take();
  CHECK(bytes[1] == 0x01);
  CHECK(bytes[4] == 0x04);
  ByteReader r(bytes);
  CHECK(r.get_u8() == 1);
  CHECK(r.get_u32() == 0x01020304);
  CHECK(r.get_u64() == 0x1122334455667788ull);
  CHECK(r.get_varint() == 300);
  CHECK(r.get_string() == "abc");
  CHECK(r.get_f64() == 2.5);
  CHECK(r.at_end());
  CHECK_THROWS_AS(r.get_u8(), crm::DecodeError);
}

TEST_CASE("discretized gaussian matches its closed-form codelength") {
  const double var = 2.7;
  auto w = discretized_gaussian(0.0, var, -255, 255);
  const double k = gaussian_log2_normalizer(0.0, var, -255, 255);
  for (int r : {-3, 0, 1, 5}) {
    const double closed = r * r * std::log2(std::exp(1.0)) / (2 * var) + k;
    CHECK(-std::log2(w[r + 255]) == doctest::Approx(closed).epsilon(1e-12));
  }
  CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
}
