#include "rsflicker/codec.hpp"

#include <algorithm>
#include <cmath>
#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include <png.h>

namespace rsf {
namespace {

constexpr std::size_t kMaxPixels = std::size_t{1} << 28;
constexpr std::size_t kMaxSide = std::size_t{1} << 20;

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CodecError(CodecError::Kind::Io, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CodecError(CodecError::Kind::Io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw CodecError(CodecError::Kind::Io, "short write to " + path.string());
}

class PnmHeaderReader {
 public:
  explicit PnmHeaderReader(std::span<const std::uint8_t> b) : b_(b) {}

  std::size_t next_uint() {
    skip_space_and_comments();
    if (pos_ >= b_.size()) throw CodecError(CodecError::Kind::Truncated, "truncated PNM header");
    if (!std::isdigit(b_[pos_]))
      throw CodecError(CodecError::Kind::UnsupportedFormat, "malformed PNM header");
    std::size_t v = 0;
    while (pos_ < b_.size() && std::isdigit(b_[pos_])) {
      v = v * 10 + (b_[pos_++] - '0');
      if (v > (std::size_t{1} << 24))
        throw CodecError(CodecError::Kind::DimensionOverflow, "PNM header value overflows");
    }
    return v;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t raster_start() {
    if (pos_ >= b_.size()) throw CodecError(CodecError::Kind::Truncated, "truncated PNM header");
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < b_.size()) {
      if (std::isspace(b_[pos_])) {
        ++pos_;
      } else if (b_[pos_] == '#') {
        while (pos_ < b_.size() && b_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> b_;
  std::size_t pos_ = 2;
};

bool has_png_signature(std::span<const std::uint8_t> b) {
  static constexpr std::uint8_t sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  return b.size() >= 8 && std::memcmp(b.data(), sig, 8) == 0;
}

Image decode_png(std::span<const std::uint8_t> bytes) {
  // IHDR is the first chunk: 8 signature + 4 length + 4 type + 13 payload.
  if (bytes.size() < 33) throw CodecError(CodecError::Kind::Truncated, "truncated PNG header");
  if (std::memcmp(bytes.data() + 12, "IHDR", 4) != 0)
    throw CodecError(CodecError::Kind::UnsupportedFormat, "PNG does not start with IHDR");
  const int bit_depth = bytes[24];
  const int color_type = bytes[25];
  const int interlace = bytes[28];
  if (interlace != 0) throw CodecError(CodecError::Kind::UnsupportedFormat, "interlaced PNG is not supported");
  if (bit_depth != 8 && color_type != 3)
    throw CodecError(CodecError::Kind::UnsupportedFormat,
                     "only 8-bit PNG is supported (got " + std::to_string(bit_depth) + "-bit)");

  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&png, bytes.data(), bytes.size()))
    throw CodecError(CodecError::Kind::UnsupportedFormat, std::string("PNG decode: ") + png.message);
  const bool color = (png.format & PNG_FORMAT_FLAG_COLOR) != 0;
  png.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const std::size_t ch = color ? 3 : 1;
  if (png.width > kMaxSide || png.height > kMaxSide ||
      static_cast<std::size_t>(png.width) * png.height > kMaxPixels) {
    png_image_free(&png);
    throw CodecError(CodecError::Kind::DimensionOverflow, "PNG dimensions overflow");
  }
  std::vector<std::uint8_t> raster(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, raster.data(), 0, nullptr)) {
    const std::string msg = png.message;
    png_image_free(&png);
    throw CodecError(CodecError::Kind::Truncated, "PNG decode: " + msg);
  }
  Image img(png.height, png.width, ch);
  auto dst = img.data();
  for (std::size_t k = 0; k < raster.size(); ++k) dst[k] = srgb_to_linear(raster[k] / 255.0);
  return img;
}

std::vector<std::uint8_t> encode_png(const Image& img) {
  std::vector<std::uint8_t> raster(img.size());
  auto src = img.data();
  for (std::size_t k = 0; k < raster.size(); ++k)
    raster[k] = quantize8(linear_to_srgb(std::clamp(src[k], 0.0, 1.0)));
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(img.cols());
  png.height = static_cast<png_uint_32>(img.rows());
  png.format = img.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&png, nullptr, &size, 0, raster.data(), 0, nullptr))
    throw CodecError(CodecError::Kind::Io, std::string("PNG encode: ") + png.message);
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&png, out.data(), &size, 0, raster.data(), 0, nullptr))
    throw CodecError(CodecError::Kind::Io, std::string("PNG encode: ") + png.message);
  out.resize(size);
  return out;
}

std::string lower_ext(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

}  // namespace

std::uint8_t quantize8(double v) {
  const double c = std::clamp(std::isfinite(v) ? v : 0.0, 0.0, 1.0);
  return static_cast<std::uint8_t>(std::floor(c * 255.0 + 0.5));
}

double srgb_to_linear(double v) {
  return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
}

double linear_to_srgb(double v) {
  return v <= 0.0031308 ? v * 12.92 : 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
}

Image decode_pnm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P')
    throw CodecError(CodecError::Kind::UnsupportedFormat, "not a PNM file");
  std::size_t ch = 0;
  if (bytes[1] == '5') ch = 1;
  else if (bytes[1] == '6') ch = 3;
  else throw CodecError(CodecError::Kind::UnsupportedFormat, "only binary P5/P6 PNM is supported");

  PnmHeaderReader hdr(bytes);
  const std::size_t w = hdr.next_uint();
  const std::size_t h = hdr.next_uint();
  const std::size_t maxval = hdr.next_uint();
  if (w == 0 || h == 0) throw CodecError(CodecError::Kind::UnsupportedFormat, "PNM has zero dimension");
  if (w > kMaxSide || h > kMaxSide || w * h > kMaxPixels) throw CodecError(CodecError::Kind::DimensionOverflow, "PNM dimensions overflow");
  if (maxval == 0 || maxval > 255)
    throw CodecError(CodecError::Kind::UnsupportedFormat, "only 8-bit PNM (maxval <= 255) is supported");
  const std::size_t start = hdr.raster_start();
  const std::size_t need = w * h * ch;
  if (bytes.size() < start + need) throw CodecError(CodecError::Kind::Truncated, "truncated PNM raster");

  Image img(h, w, ch);
  auto dst = img.data();
  const double maxv = static_cast<double>(maxval);
  for (std::size_t k = 0; k < need; ++k) dst[k] = static_cast<double>(std::min<std::size_t>(bytes[start + k], maxval)) / maxv;
  return img;
}

std::vector<std::uint8_t> encode_pnm(const Image& img) {
  const std::string header = std::string(img.channels() == 3 ? "P6" : "P5") + "\n" +
                             std::to_string(img.cols()) + " " + std::to_string(img.rows()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(header.size() + img.size());
  for (double v : img.data()) out.push_back(quantize8(v));
  return out;
}

Image load_image(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  if (has_png_signature(bytes)) return decode_png(bytes);
  if (bytes.size() >= 2 && bytes[0] == 'P') return decode_pnm(bytes);
  throw CodecError(CodecError::Kind::UnsupportedFormat, "unrecognized image format: " + path.string());
}

void save_image(const Image& img, const std::filesystem::path& path, Encoding enc) {
  if (enc == Encoding::Auto) enc = lower_ext(path) == ".png" ? Encoding::Png : Encoding::Pgm;
  switch (enc) {
    case Encoding::Png:
      write_file(path, encode_png(img));
      return;
    case Encoding::Pgm:
    case Encoding::Ppm:
    case Encoding::Auto:
      // The header follows the channel count; PGM vs PPM is the image's shape.
      write_file(path, encode_pnm(img));
      return;
  }
}

}  // namespace rsf
