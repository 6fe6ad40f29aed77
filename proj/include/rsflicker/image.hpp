#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace rsf {

/// Linear-light image, interleaved channels, row-major. Pixel values are
/// finite and non-negative; they may exceed 1 before encoding.
class Image {
 public:
  Image() = default;
  Image(std::size_t rows, std::size_t cols, std::size_t channels = 1, double fill = 0.0);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t channels() const { return channels_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& at(std::size_t i, std::size_t j, std::size_t c = 0) {
    return data_[(i * cols_ + j) * channels_ + c];
  }
  double at(std::size_t i, std::size_t j, std::size_t c = 0) const {
    return data_[(i * cols_ + j) * channels_ + c];
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  std::span<double> row(std::size_t i) {
    return std::span<double>(data_).subspan(i * cols_ * channels_, cols_ * channels_);
  }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(data_).subspan(i * cols_ * channels_, cols_ * channels_);
  }

  bool same_shape(const Image& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && channels_ == o.channels_;
  }

  /// Throws std::invalid_argument if any pixel is negative or not finite.
  void validate() const;

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t channels_ = 1;
  std::vector<double> data_;
};

/// Linear luminance of pixel (i, j): the value itself for gray, Rec. 709 weights for RGB.
double luminance(const Image& img, std::size_t i, std::size_t j);

/// Mean luminance of every row.
std::vector<double> row_luminance_profile(const Image& img);

double mean_luminance(const Image& img);

Image scaled(const Image& img, double factor);

/// Box-filter resample to a new size; used as the shooting-distance proxy.
Image resize_area(const Image& img, std::size_t rows, std::size_t cols);

/// SHA-256 of the shape and the raw pixel doubles, lowercase hex.
std::string content_hash(const Image& img);

}  // namespace rsf
