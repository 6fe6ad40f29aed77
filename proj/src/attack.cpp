#include "rsflicker/attack.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <random>

#include <omp.h>

namespace rsf {
namespace {

std::vector<double> axis(double first, double max, double step) {
  std::vector<double> v;
  for (std::size_t k = 0;; ++k) {
    const double x = first + static_cast<double>(k) * step;
    if (x > max + 1e-9) break;
    v.push_back(x);
  }
  return v;
}

struct Outcome {
  bool success = false;
  double loss = 0.0;
  std::exception_ptr error;
};

using Evaluator = std::function<Outcome(const PerturbationParams&, double phase_us, std::size_t worker)>;

struct GridPoint {
  PerturbationParams theta;
  double period_us;
};

// Runs the grid in row-major order across `iterations`. Evaluation of a block
// is parallel; results are consumed in grid order so the outcome does not
// depend on scheduling.
AttackResult run_grid(const SearchSpace& space, const CaptureModel& model, std::size_t workers,
                      const Evaluator& eval) {
  space.validate();
  AttackResult result;
  result.mode = space.mode;
  result.space = space;

  std::vector<GridPoint> points;
  for (const auto& theta : space.grid()) {
    const auto pulse = theta_to_signal(theta, model.sensor, model.levels, 0.0);
    if (!check_imperceptible(pulse, model.flicker_threshold_hz)) {
      result.skipped_perceptible.push_back(theta);
    } else {
      points.push_back({theta, pulse.period_us});
    }
  }

  const std::size_t iterations = model.randomize_phase ? space.max_iters : 1;
  std::vector<char> found(points.size(), 0);
  std::vector<ThetaHit> hit_at(points.size());
  const std::size_t block = space.mode == SearchMode::FirstHit ? std::max<std::size_t>(workers, 1) * 4
                                                               : std::max<std::size_t>(points.size(), 1);

  for (std::size_t it = 0; it < iterations; ++it) {
    std::vector<double> phases(points.size(), model.phase_us);
    if (model.randomize_phase) {
      std::mt19937_64 gen(model.seed + 0x9e3779b97f4a7c15ULL * (it + 1));
      for (std::size_t k = 0; k < points.size(); ++k)
        phases[k] = static_cast<double>(gen() >> 11) * 0x1.0p-53 * points[k].period_us;
    }

    for (std::size_t lo = 0; lo < points.size(); lo += block) {
      const std::size_t hi = std::min(points.size(), lo + block);
      std::vector<Outcome> out(hi - lo);
      const auto n = static_cast<std::ptrdiff_t>(hi - lo);
#pragma omp parallel for schedule(dynamic) num_threads(static_cast<int>(workers))
      for (std::ptrdiff_t k = 0; k < n; ++k) {
        const std::size_t idx = lo + static_cast<std::size_t>(k);
        try {
          out[k] = eval(points[idx].theta, phases[idx], static_cast<std::size_t>(omp_get_thread_num()));
        } catch (...) {
          out[k].error = std::current_exception();
        }
      }

      for (std::size_t k = 0; k < out.size(); ++k) {
        const std::size_t idx = lo + k;
        ++result.evaluations;
        if (out[k].error) {
          for (std::size_t j = 0; j < idx; ++j)
            if (found[j]) result.hits.push_back(hit_at[j]);
          std::string why = "oracle failure";
          try {
            std::rethrow_exception(out[k].error);
          } catch (const std::exception& e) {
            why = e.what();
          } catch (...) {
          }
          throw AttackAborted(why, std::move(result), points[idx].theta);
        }
        if (out[k].success && !found[idx]) {
          found[idx] = 1;
          hit_at[idx] = {points[idx].theta, out[k].loss, phases[idx]};
          if (space.mode == SearchMode::FirstHit) {
            result.hits.push_back(hit_at[idx]);
            return result;
          }
        }
      }
    }
  }

  for (std::size_t k = 0; k < points.size(); ++k)
    if (found[k]) result.hits.push_back(hit_at[k]);
  return result;
}

CaptureModel fitted(const CaptureModel& model, const Image& x) {
  CaptureModel m = model;
  m.sensor.rows = x.rows();
  m.sensor.cols = x.cols();
  m.sensor.validate();
  return m;
}

}  // namespace

const char* to_string(SearchMode mode) {
  return mode == SearchMode::FirstHit ? "first-hit" : "collect-all";
}

SearchMode parse_search_mode(const std::string& text) {
  if (text == "first-hit") return SearchMode::FirstHit;
  if (text == "collect-all") return SearchMode::CollectAll;
  throw std::invalid_argument("search mode must be first-hit or collect-all, got '" + text + "'");
}

void SearchSpace::validate() const {
  if (max_iters < 1) throw std::invalid_argument("search needs at least one iteration");
  if (!(b_max >= 1.0) || !(s_max >= 1.0)) throw std::invalid_argument("b_max and s_max must be at least 1");
  if (!(alpha_max >= 0.0 && alpha_max <= 90.0)) throw std::invalid_argument("alpha_max must lie in [0, 90]");
  if (!(b_step > 0.0) || !(s_step > 0.0) || !(alpha_step > 0.0))
    throw std::invalid_argument("search steps must be positive");
}

std::vector<PerturbationParams> SearchSpace::grid() const {
  validate();
  std::vector<PerturbationParams> g;
  const auto bs = axis(1.0, b_max, b_step);
  const auto ss = axis(1.0, s_max, s_step);
  const auto as = axis(0.0, alpha_max, alpha_step);
  g.reserve(bs.size() * ss.size() * as.size());
  for (double b : bs)
    for (double s : ss)
      for (double a : as) g.push_back({b, s, a});
  return g;
}

std::vector<PerturbationParams> AttackResult::thetas() const {
  std::vector<PerturbationParams> v;
  for (const auto& h : hits) v.push_back(h.theta);
  return v;
}

std::vector<double> AttackResult::losses() const {
  std::vector<double> v;
  for (const auto& h : hits) v.push_back(h.loss);
  return v;
}

Image capture(const Image& x, const PulseParams& pulse, double tilt_deg, const SensorConfig& sensor) {
  SensorConfig s = sensor;
  s.rows = x.rows();
  s.cols = x.cols();
  const Pattern pat = render_pattern(s, pulse, tilt_deg);
  Image out = expose(x, pat);
  const double inv = 1.0 / pat.full_scale();
  for (double& v : out.data()) v *= inv;
  return out;
}

Image capture(const Image& x, const PerturbationParams& theta, const CaptureModel& model, double phase_us) {
  const auto pulse = theta_to_signal(theta, model.sensor, model.levels, phase_us);
  return capture(x, pulse, theta.tilt_deg, model.sensor);
}

double dos_loss(const DetectorVerdict& verdict, int y) {
  const double d = static_cast<double>(y - verdict.label);
  return d * d;
}

double dodging_loss(const Embedding& a, const Embedding& b) { return feature_distance(a, b); }

AttackResult grid_search_dos(const Image& x, const SearchSpace& space, const OraclePool<Detector>& pool,
                             const CaptureModel& model, int y) {
  if (pool.oracles.empty()) throw std::invalid_argument("no detector supplied");
  if (y != 0 && y != 1) throw std::invalid_argument("true label must be 0 or 1");
  const CaptureModel m = fitted(model, x);
  if (pool.for_worker(0).detect(x).label != y)
    throw PreconditionError("detector does not report the true label on the unmodulated image");
  const std::size_t workers = pool.workers();
  return run_grid(space, m, workers, [&](const PerturbationParams& theta, double phase, std::size_t w) {
    const double loss = dos_loss(pool.for_worker(w).detect(capture(x, theta, m, phase)), y);
    return Outcome{loss > 0.0, loss, nullptr};
  });
}

AttackResult grid_search_dos(const Image& x, const SearchSpace& space, Detector& detector,
                             const CaptureModel& model, int y) {
  return grid_search_dos(x, space, OraclePool<Detector>{{&detector}, 1}, model, y);
}

AttackResult grid_search_dodging(const Image& x, const Image& u, const SearchSpace& space,
                                 const OraclePool<Embedder>& pool, double delta, const CaptureModel& model) {
  if (pool.oracles.empty()) throw std::invalid_argument("no embedder supplied");
  if (!x.same_shape(u)) throw std::invalid_argument("attacker and user images differ in shape");
  VerifierConfig{delta}.validate();
  const CaptureModel m = fitted(model, x);
  Embedder& first = pool.for_worker(0);
  if (dodging_loss(first.embed(x), first.embed(u)) <= delta)
    throw PreconditionError("the unperturbed pair already verifies as the same person");
  const std::size_t workers = pool.workers();
  return run_grid(space, m, workers, [&](const PerturbationParams& theta, double phase, std::size_t w) {
    Embedder& emb = pool.for_worker(w);
    const double loss = dodging_loss(emb.embed(capture(x, theta, m, phase)), emb.embed(capture(u, theta, m, phase)));
    return Outcome{loss <= delta, loss, nullptr};
  });
}

AttackResult grid_search_dodging(const Image& x, const Image& u, const SearchSpace& space, Embedder& embedder,
                                 double delta, const CaptureModel& model) {
  return grid_search_dodging(x, u, space, OraclePool<Embedder>{{&embedder}, 1}, delta, model);
}

namespace {
double rate(std::size_t hits, std::size_t total) {
  if (total == 0) throw std::invalid_argument("success rate needs a positive sample count");
  if (hits > total) throw std::invalid_argument("successes exceed the sample count");
  return static_cast<double>(hits) / static_cast<double>(total);
}
}  // namespace

double success_rate_dos(std::size_t n_a, std::size_t n_b) { return rate(n_a, n_b); }
double success_rate_dodging(std::size_t m_a, std::size_t m_b) { return rate(m_a, m_b); }

}  // namespace rsf
