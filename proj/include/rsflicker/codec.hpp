#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsflicker/image.hpp"

namespace rsf {

class CodecError : public std::runtime_error {
 public:
  enum class Kind { UnsupportedFormat, Truncated, DimensionOverflow, Io };
  CodecError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

enum class Encoding { Auto, Pgm, Ppm, Png };

/// PGM (P5) / PPM (P6) with maxval <= 255 map to linear [0,1] as value / maxval.
/// PNG must be 8-bit and non-interlaced; its samples are sRGB and are linearized.
Image load_image(const std::filesystem::path& path);

/// Clamps to [0,1] and quantizes round-half-up. Auto picks the format from
/// the extension (.png, .ppm, else PGM for gray and PPM for color).
void save_image(const Image& img, const std::filesystem::path& path, Encoding enc = Encoding::Auto);

std::vector<std::uint8_t> encode_pnm(const Image& img);
Image decode_pnm(std::span<const std::uint8_t> bytes);

/// 8-bit quantization used by every encoder: floor(clamp(v,0,1) * 255 + 0.5).
std::uint8_t quantize8(double v);

double srgb_to_linear(double v);
double linear_to_srgb(double v);

}  // namespace rsf
