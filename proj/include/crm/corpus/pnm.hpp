#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "crm/image/image.hpp"

namespace crm::corpus {

// Binary PGM (P5) with maxval 255. Headers may carry comments and any
// whitespace; canonical output is "P5\n<w> <h>\n255\n" followed by pixels.
// Malformed headers, other maxvals and short payloads raise FormatError.

// Parses one image starting at `offset`; advances `offset` past it.
image::Image parse_pgm(std::span<const std::uint8_t> bytes, std::size_t& offset);
image::Image parse_pgm(std::span<const std::uint8_t> bytes);
// Concatenated P5 images (e.g. a stereo pair). The whole input must be used.
std::vector<image::Image> parse_pgm_sequence(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> serialize_pgm(const image::Image& img);
void append_pgm(std::vector<std::uint8_t>& out, const image::Image& img);

image::Image load_pnm(const std::filesystem::path& path);
void store_pnm(const image::Image& img, const std::filesystem::path& path);

}  // namespace crm::corpus
