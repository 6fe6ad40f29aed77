#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "rsflicker/image.hpp"

namespace rsf {

/// Face detector output: 1 = face present, 0 = face absent.
struct DetectorVerdict {
  int label = 1;

  static DetectorVerdict present() { return {1}; }
  static DetectorVerdict absent() { return {0}; }
  friend bool operator==(const DetectorVerdict&, const DetectorVerdict&) = default;
};

/// Face feature vector. Entries are finite and dim() > 0 for a valid embedding.
struct Embedding {
  std::vector<double> vector;

  std::size_t dim() const { return vector.size(); }
  void validate() const;
  friend bool operator==(const Embedding&, const Embedding&) = default;
};

/// Verification threshold delta on the Euclidean feature distance.
struct VerifierConfig {
  double threshold = 1.0;
  void validate() const;
};

class Detector {
 public:
  virtual ~Detector() = default;
  virtual DetectorVerdict detect(const Image& image) = 0;
  /// Whether detect() may be called from several threads at once.
  virtual bool thread_safe() const { return false; }
  virtual std::string name() const = 0;
};

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual Embedding embed(const Image& image) = 0;
  virtual bool thread_safe() const { return false; }
  virtual std::string name() const = 0;
};

/// Half-open row range [begin, end).
struct RowBand {
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Deterministic detector: "absent" iff some run of at least `min_run`
/// consecutive rows inside `band` has mean luminance below
/// dark_thresh * (image mean luminance).
DetectorVerdict stub_fringe_detect(const Image& image, RowBand band, double dark_thresh,
                                   std::size_t min_run);

/// Row-luminance profile averaged into `dim` equal row buckets, L2-normalized.
Embedding stub_profile_embed(const Image& image, std::size_t dim);

/// Euclidean distance. Throws std::invalid_argument on dimension mismatch.
double feature_distance(const Embedding& a, const Embedding& b);

class FringeDetectorStub final : public Detector {
 public:
  struct Options {
    double band_begin_fraction = 0.4;
    double band_end_fraction = 0.6;
    double dark_thresh = 0.5;
    std::size_t min_run = 15;
  };
  explicit FringeDetectorStub(Options opts) : opts_(opts) {}
  FringeDetectorStub() : FringeDetectorStub(Options{}) {}

  DetectorVerdict detect(const Image& image) override;
  bool thread_safe() const override { return true; }
  std::string name() const override { return "stub-fringe"; }
  RowBand band_for(std::size_t rows) const;
  const Options& options() const { return opts_; }

 private:
  Options opts_;
};

class ProfileEmbedderStub final : public Embedder {
 public:
  explicit ProfileEmbedderStub(std::size_t dim = 16) : dim_(dim) {}
  Embedding embed(const Image& image) override { return stub_profile_embed(image, dim_); }
  bool thread_safe() const override { return true; }
  std::string name() const override { return "stub-profile"; }
  std::size_t dim() const { return dim_; }

 private:
  std::size_t dim_;
};

}  // namespace rsf
