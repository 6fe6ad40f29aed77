#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsflicker/detector.hpp"
#include "rsflicker/image.hpp"
#include "rsflicker/perturb.hpp"
#include "rsflicker/sensor.hpp"

namespace rsf {

enum class SearchMode { FirstHit, CollectAll };

const char* to_string(SearchMode mode);
SearchMode parse_search_mode(const std::string& text);

/// Grid over (b, s, alpha). b and s start at 1 row, alpha at 0 degrees;
/// iteration order is b outer, s middle, alpha inner.
struct SearchSpace {
  std::size_t max_iters = 1;
  double b_max = 40;
  double s_max = 40;
  double alpha_max = 90;
  double b_step = 1;
  double s_step = 1;
  double alpha_step = 45;
  SearchMode mode = SearchMode::FirstHit;

  void validate() const;
  std::vector<PerturbationParams> grid() const;
};

/// How a perturbation turns into a captured frame: the sensor (its rows/cols
/// are taken from the image being captured), light levels, and the LED phase.
struct CaptureModel {
  SensorConfig sensor;
  LightLevels levels;
  double phase_us = 0.0;
  /// Draw a fresh phase in [0, Tp) per grid point and iteration.
  bool randomize_phase = false;
  std::uint64_t seed = 0;
  double flicker_threshold_hz = kFlickerFusionHz;
};

/// Frame captured under the modulated light, normalized so a fully lit row
/// maps to gain 1 (X_adv / (k * level_on * t_e)).
Image capture(const Image& x, const PerturbationParams& theta, const CaptureModel& model, double phase_us);
Image capture(const Image& x, const PulseParams& pulse, double tilt_deg, const SensorConfig& sensor);

/// (y - label)^2.
double dos_loss(const DetectorVerdict& verdict, int y = 1);

double dodging_loss(const Embedding& a, const Embedding& b);

struct ThetaHit {
  PerturbationParams theta;
  double loss = 0.0;
  double phase_us = 0.0;
};

struct AttackResult {
  SearchMode mode = SearchMode::FirstHit;
  SearchSpace space;
  std::vector<ThetaHit> hits;
  /// Grid points handed to the oracle, in row-major order, summed over
  /// iterations. A dodging evaluation issues two embedder calls.
  std::size_t evaluations = 0;
  /// Grid points whose flicker would be visible; never evaluated.
  std::vector<PerturbationParams> skipped_perceptible;

  std::vector<PerturbationParams> thetas() const;
  std::vector<double> losses() const;
};

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An oracle failed mid-search. `partial` holds every hit found before the
/// failing grid point in row-major order.
class AttackAborted : public std::runtime_error {
 public:
  AttackAborted(const std::string& what, AttackResult partial, PerturbationParams failing)
      : std::runtime_error(what), partial_(std::move(partial)), failing_(failing) {}
  const AttackResult& partial() const { return partial_; }
  const PerturbationParams& failing_theta() const { return failing_; }

 private:
  AttackResult partial_;
  PerturbationParams failing_;
};

/// Oracles used by a search. With one thread-safe oracle, `jobs` threads
/// share it; otherwise worker k uses oracle k (one adapter per worker).
template <class Oracle>
struct OraclePool {
  std::vector<Oracle*> oracles;
  std::size_t jobs = 1;

  std::size_t workers() const {
    if (oracles.size() == 1) return oracles[0]->thread_safe() ? std::max<std::size_t>(jobs, 1) : 1;
    return oracles.size();
  }
  Oracle& for_worker(std::size_t w) const { return *oracles[oracles.size() == 1 ? 0 : w]; }
};

AttackResult grid_search_dos(const Image& x, const SearchSpace& space, const OraclePool<Detector>& pool,
                             const CaptureModel& model, int y = 1);
AttackResult grid_search_dos(const Image& x, const SearchSpace& space, Detector& detector,
                             const CaptureModel& model, int y = 1);

/// Both faces are captured under the same light; success iff L2 <= delta.
AttackResult grid_search_dodging(const Image& x, const Image& u, const SearchSpace& space,
                                 const OraclePool<Embedder>& pool, double delta, const CaptureModel& model);
AttackResult grid_search_dodging(const Image& x, const Image& u, const SearchSpace& space, Embedder& embedder,
                                 double delta, const CaptureModel& model);

double success_rate_dos(std::size_t n_a, std::size_t n_b);
double success_rate_dodging(std::size_t m_a, std::size_t m_b);

}  // namespace rsf
