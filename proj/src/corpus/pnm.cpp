#include "crm/corpus/pnm.hpp"

#include <cctype>
#include <string>

#include "crm/corpus/files.hpp"
#include "crm/error.hpp"

namespace crm::corpus {

namespace {

bool is_space(std::uint8_t c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f'; }

void skip_space_and_comments(std::span<const std::uint8_t> b, std::size_t& pos) {
  while (pos < b.size()) {
    if (is_space(b[pos])) {
      ++pos;
    } else if (b[pos] == '#') {
      while (pos < b.size() && b[pos] != '\n') ++pos;
    } else {
      return;
    }
  }
}

long read_header_int(std::span<const std::uint8_t> b, std::size_t& pos, const char* field) {
  skip_space_and_comments(b, pos);
  if (pos >= b.size() || !std::isdigit(b[pos])) throw FormatError(std::string("PGM header: missing ") + field);
  long v = 0;
  while (pos < b.size() && std::isdigit(b[pos])) {
    v = v * 10 + (b[pos] - '0');
    if (v > (1L << 30)) throw FormatError(std::string("PGM header: ") + field + " too large");
    ++pos;
  }
  return v;
}

}  // namespace

image::Image parse_pgm(std::span<const std::uint8_t> bytes, std::size_t& offset) {
  std::size_t pos = offset;
  if (bytes.size() < pos + 2 || bytes[pos] != 'P' || bytes[pos + 1] != '5')
    throw FormatError("not a binary PGM (P5) file");
  pos += 2;
  if (pos >= bytes.size() || (!is_space(bytes[pos]) && bytes[pos] != '#'))
    throw FormatError("PGM header: bad magic");
  const long width = read_header_int(bytes, pos, "width");
  const long height = read_header_int(bytes, pos, "height");
  const long maxval = read_header_int(bytes, pos, "maxval");
  if (width <= 0 || height <= 0) throw FormatError("PGM header: dimensions must be positive");
  if (maxval != 255) throw FormatError("unsupported PGM depth: maxval " + std::to_string(maxval) + " (only 255)");
  if (pos >= bytes.size() || !is_space(bytes[pos])) throw FormatError("PGM header: missing raster separator");
  ++pos;
  const auto count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() - pos < count) throw FormatError("PGM payload truncated");
  std::vector<std::uint8_t> pixels(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                                   bytes.begin() + static_cast<std::ptrdiff_t>(pos + count));
  offset = pos + count;
  return image::Image(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
}

image::Image parse_pgm(std::span<const std::uint8_t> bytes) {
  std::size_t offset = 0;
  auto img = parse_pgm(bytes, offset);
  if (offset != bytes.size()) throw FormatError("trailing bytes after PGM raster");
  return img;
}

std::vector<image::Image> parse_pgm_sequence(std::span<const std::uint8_t> bytes) {
  std::vector<image::Image> out;
  std::size_t offset = 0;
  while (offset < bytes.size()) out.push_back(parse_pgm(bytes, offset));
  if (out.empty()) throw FormatError("empty PGM stream");
  return out;
}

void append_pgm(std::vector<std::uint8_t>& out, const image::Image& img) {
  const std::string header = "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  out.insert(out.end(), header.begin(), header.end());
  out.insert(out.end(), img.pixels().begin(), img.pixels().end());
}

std::vector<std::uint8_t> serialize_pgm(const image::Image& img) {
  std::vector<std::uint8_t> out;
  out.reserve(img.size() + 20);
  append_pgm(out, img);
  return out;
}

image::Image load_pnm(const std::filesystem::path& path) { return parse_pgm(read_file(path)); }

void store_pnm(const image::Image& img, const std::filesystem::path& path) { write_file(path, serialize_pgm(img)); }

}  // namespace crm::corpus
