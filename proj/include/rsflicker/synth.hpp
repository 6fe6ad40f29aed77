#pragma once

#include <cstddef>
#include <cstdint>

#include "rsflicker/image.hpp"

namespace rsf {

/// Rows [0.4H, 0.6H) of a synthetic face hold its darker feature band (eyes, brows).
struct FeatureBand {
  std::size_t begin;
  std::size_t end;
};

FeatureBand synth_feature_band(std::size_t rows);

/// Deterministic face-like grayscale target: a bright oval on a darker
/// background with a dimmer feature band, eyes and a mouth whose geometry
/// and tones vary with `seed`. Requires rows, cols >= 64.
Image synth_face(std::uint64_t seed, std::size_t rows = 960, std::size_t cols = 1280);

}  // namespace rsf
