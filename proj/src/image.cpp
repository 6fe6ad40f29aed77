#include "rsflicker/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>

#include <openssl/evp.h>

namespace rsf {

Image::Image(std::size_t rows, std::size_t cols, std::size_t channels, double fill)
    : rows_(rows), cols_(cols), channels_(channels) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("image dimensions must be positive");
  if (channels != 1 && channels != 3) throw std::invalid_argument("image must have 1 or 3 channels");
  if (rows > (std::size_t{1} << 20) || cols > (std::size_t{1} << 20))
    throw std::invalid_argument("image dimensions overflow");
  data_.assign(rows * cols * channels, fill);
}

void Image::validate() const {
  for (double v : data_)
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument("image pixels must be finite and non-negative");
}

double luminance(const Image& img, std::size_t i, std::size_t j) {
  if (img.channels() == 1) return img.at(i, j);
  return 0.2126 * img.at(i, j, 0) + 0.7152 * img.at(i, j, 1) + 0.0722 * img.at(i, j, 2);
}

std::vector<double> row_luminance_profile(const Image& img) {
  std::vector<double> out(img.rows(), 0.0);
  for (std::size_t i = 0; i < img.rows(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < img.cols(); ++j) acc += luminance(img, i, j);
    out[i] = acc / static_cast<double>(img.cols());
  }
  return out;
}

double mean_luminance(const Image& img) {
  const auto prof = row_luminance_profile(img);
  double acc = 0.0;
  for (double v : prof) acc += v;
  return prof.empty() ? 0.0 : acc / static_cast<double>(prof.size());
}

Image scaled(const Image& img, double factor) {
  Image out = img;
  for (double& v : out.data()) v *= factor;
  return out;
}

namespace {

struct Tap {
  std::size_t src;
  double weight;
};

// Fractional-overlap weights mapping `n_out` cells onto `n_in` source cells.
std::vector<std::vector<Tap>> area_weights(std::size_t n_in, std::size_t n_out) {
  std::vector<std::vector<Tap>> taps(n_out);
  const double ratio = static_cast<double>(n_in) / static_cast<double>(n_out);
  for (std::size_t o = 0; o < n_out; ++o) {
    const double lo = o * ratio;
    const double hi = (o + 1) * ratio;
    auto first = static_cast<std::size_t>(std::floor(lo));
    auto last = std::min(n_in, static_cast<std::size_t>(std::ceil(hi)));
    double total = 0.0;
    for (std::size_t s = first; s < last; ++s) {
      const double w = std::min(hi, s + 1.0) - std::max(lo, static_cast<double>(s));
      if (w > 0.0) {
        taps[o].push_back({s, w});
        total += w;
      }
    }
    for (auto& t : taps[o]) t.weight /= total;
  }
  return taps;
}

}  // namespace

Image resize_area(const Image& img, std::size_t rows, std::size_t cols) {
  const auto wy = area_weights(img.rows(), rows);
  const auto wx = area_weights(img.cols(), cols);
  const std::size_t ch = img.channels();
  Image horiz(img.rows(), cols, ch);
  for (std::size_t i = 0; i < img.rows(); ++i)
    for (std::size_t j = 0; j < cols; ++j)
      for (std::size_t c = 0; c < ch; ++c) {
        double acc = 0.0;
        for (const auto& t : wx[j]) acc += t.weight * img.at(i, t.src, c);
        horiz.at(i, j, c) = acc;
      }
  Image out(rows, cols, ch);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      for (std::size_t c = 0; c < ch; ++c) {
        double acc = 0.0;
        for (const auto& t : wy[i]) acc += t.weight * horiz.at(t.src, j, c);
        out.at(i, j, c) = acc;
      }
  return out;
}

std::string content_hash(const Image& img) {
  const std::uint64_t shape[3] = {img.rows(), img.cols(), img.channels()};
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  EVP_DigestUpdate(ctx, shape, sizeof(shape));
  EVP_DigestUpdate(ctx, img.data().data(), img.size() * sizeof(double));
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  hex.reserve(2 * len);
  char buf[3];
  for (unsigned int k = 0; k < len; ++k) {
    std::snprintf(buf, sizeof(buf), "%02x", digest[k]);
    hex += buf;
  }
  return hex;
}

}  // namespace rsf
