#include <gtest/gtest.h>

#include <atomic>
#include <cmath>

#include "exhaustive.hpp"
#include "rsflicker/attack.hpp"
#include "rsflicker/synth.hpp"

using rsf::PerturbationParams;
using rsf::SearchMode;
using rsf::SearchSpace;

namespace {

// Present for the clean image, absent for anything else.
class CleanOnly final : public rsf::Detector {
 public:
  explicit CleanOnly(const rsf::Image& clean) : hash_(rsf::content_hash(clean)) {}
  rsf::DetectorVerdict detect(const rsf::Image& img) override {
    ++calls;
    return {rsf::content_hash(img) == hash_ ? 1 : 0};
  }
  bool thread_safe() const override { return true; }
  std::string name() const override { return "clean-only"; }
  std::atomic<int> calls{0};

 private:
  std::string hash_;
};

class AlwaysPresent final : public rsf::Detector {
 public:
  rsf::DetectorVerdict detect(const rsf::Image&) override { return {1}; }
  std::string name() const override { return "always"; }
};

// Tells the two clean faces apart and maps every captured image to one point.
class Collapsing final : public rsf::Embedder {
 public:
  Collapsing(const rsf::Image& x, const rsf::Image& u) : x_(rsf::content_hash(x)), u_(rsf::content_hash(u)) {}
  rsf::Embedding embed(const rsf::Image& img) override {
    const auto h = rsf::content_hash(img);
    if (h == x_) return {{1.0, 0.0}};
    if (h == u_) return {{0.0, 1.0}};
    return {{0.5, 0.5}};
  }
  std::string name() const override { return "collapsing"; }

 private:
  std::string x_, u_;
};

// Delegates to the stub, but throws on call number `fail_at` (1-based).
class FailingDetector final : public rsf::Detector {
 public:
  FailingDetector(rsf::FringeDetectorStub::Options o, int fail_at) : stub_(o), fail_at_(fail_at) {}
  rsf::DetectorVerdict detect(const rsf::Image& img) override {
    if (++calls_ == fail_at_) throw std::runtime_error("oracle crashed");
    return stub_.detect(img);
  }
  std::string name() const override { return "failing"; }

 private:
  rsf::FringeDetectorStub stub_;
  int fail_at_;
  int calls_ = 0;
};

rsf::CaptureModel model25() {
  rsf::CaptureModel m;
  m.sensor.interline_delay_us = 25;
  m.sensor.exposure_us = 25;
  return m;
}

rsf::FringeDetectorStub::Options stub_opts(std::size_t min_run = 15) { return {0.4, 0.6, 0.5, min_run}; }

SearchSpace space(double b_max, double s_max, double alpha_max, SearchMode mode) {
  SearchSpace s;
  s.b_max = b_max;
  s.s_max = s_max;
  s.alpha_max = alpha_max;
  s.mode = mode;
  return s;
}

std::vector<PerturbationParams> as_thetas(const std::vector<oracle::Point>& pts) {
  std::vector<PerturbationParams> v;
  for (const auto& p : pts) v.push_back({p.b, p.s, p.alpha});
  return v;
}

}  // namespace

TEST(Attack, Losses) {
  EXPECT_EQ(rsf::dos_loss({0}, 1), 1.0);
  EXPECT_EQ(rsf::dos_loss({1}, 1), 0.0);
  EXPECT_EQ(rsf::dos_loss({0}, 0), 0.0);
  EXPECT_EQ(rsf::dodging_loss(rsf::Embedding{{1, 2}}, rsf::Embedding{{1, 2}}), 0.0);
  EXPECT_DOUBLE_EQ(rsf::dodging_loss(rsf::Embedding{{0, 0}}, rsf::Embedding{{3, 4}}), 5.0);
}

TEST(Attack, SuccessRates) {
  EXPECT_EQ(rsf::success_rate_dos(300, 300), 1.0);
  EXPECT_EQ(rsf::success_rate_dos(0, 17), 0.0);
  EXPECT_NEAR(rsf::success_rate_dos(293, 300), 0.9767, 5e-5);
  EXPECT_EQ(rsf::success_rate_dodging(44, 44), 1.0);
  EXPECT_EQ(rsf::success_rate_dodging(0, 9), 0.0);
  EXPECT_NEAR(rsf::success_rate_dodging(208, 300), 0.6933, 5e-5);
  EXPECT_THROW(rsf::success_rate_dos(0, 0), std::invalid_argument);
  EXPECT_THROW(rsf::success_rate_dodging(5, 4), std::invalid_argument);
}

TEST(Attack, SearchSpaceGrid) {
  auto s = space(2, 3, 90, SearchMode::FirstHit);
  const auto g = s.grid();
  ASSERT_EQ(g.size(), 2u * 3u * 3u);
  EXPECT_EQ(g.front(), (PerturbationParams{1, 1, 0}));
  EXPECT_EQ(g[1], (PerturbationParams{1, 1, 45}));
  EXPECT_EQ(g[3], (PerturbationParams{1, 2, 0}));
  EXPECT_EQ(g.back(), (PerturbationParams{2, 3, 90}));
  s.alpha_max = 0;
  EXPECT_EQ(s.grid().size(), 6u);
  s.b_max = 0.5;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = space(2, 2, 90, SearchMode::FirstHit);
  s.alpha_step = 0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = space(2, 2, 120, SearchMode::FirstHit);
  EXPECT_THROW(s.validate(), std::invalid_argument);
  EXPECT_EQ(rsf::parse_search_mode("collect-all"), SearchMode::CollectAll);
  EXPECT_STREQ(rsf::to_string(SearchMode::FirstHit), "first-hit");
  EXPECT_THROW(rsf::parse_search_mode("greedy"), std::invalid_argument);
}

TEST(Attack, UnattackableOracle) {
  AlwaysPresent det;
  const auto face = rsf::synth_face(0, 64, 64);
  const auto s = space(5, 4, 90, SearchMode::FirstHit);
  const auto r = rsf::grid_search_dos(face, s, det, model25());
  EXPECT_TRUE(r.hits.empty());
  EXPECT_EQ(r.evaluations, 5u * 4u * 3u);
  EXPECT_TRUE(r.skipped_perceptible.empty());
}

TEST(Attack, SingletonGrid) {
  const auto face = rsf::synth_face(0, 64, 64);
  CleanOnly det(face);
  const auto r = rsf::grid_search_dos(face, space(1, 1, 0, SearchMode::CollectAll), det, model25());
  ASSERT_EQ(r.hits.size(), 1u);
  EXPECT_EQ(r.hits[0].theta, (PerturbationParams{1, 1, 0}));
  EXPECT_EQ(r.hits[0].loss, 1.0);
  EXPECT_EQ(r.evaluations, 1u);
}

TEST(Attack, PreconditionDos) {
  rsf::Image dark(100, 40, 1, 0.5);
  for (std::size_t i = 45; i < 60; ++i)
    for (std::size_t j = 0; j < 40; ++j) dark.at(i, j) = 0.0;
  rsf::FringeDetectorStub det(stub_opts(10));
  EXPECT_THROW(rsf::grid_search_dos(dark, space(2, 2, 0, SearchMode::FirstHit), det, model25()),
               rsf::PreconditionError);
  EXPECT_THROW(rsf::grid_search_dos(dark, space(2, 2, 0, SearchMode::FirstHit), det, model25(), 2),
               std::invalid_argument);
}

TEST(Attack, CompletenessAndFirstHitAgainstExhaustiveLoop) {
  const auto face = rsf::synth_face(4, 120, 96);
  rsf::FringeDetectorStub det(stub_opts(8));
  const auto model = model25();
  const auto want = as_thetas(oracle::satisfying({1, 16, 1}, {1, 16, 1}, {0, 90, 45}, 25, [&](double b, double s, double a) {
    return rsf::stub_fringe_detect(oracle::captured(face, b, s, a, model.sensor), det.band_for(120), 0.5, 8).label == 0;
  }));
  ASSERT_FALSE(want.empty());
  ASSERT_LT(want.size(), 16u * 16u * 3u);

  const auto all = rsf::grid_search_dos(face, space(16, 16, 90, SearchMode::CollectAll), det, model);
  EXPECT_EQ(all.thetas(), want);
  EXPECT_EQ(all.evaluations, 16u * 16u * 3u);
  for (double l : all.losses()) EXPECT_EQ(l, 1.0);

  const auto first = rsf::grid_search_dos(face, space(16, 16, 90, SearchMode::FirstHit), det, model);
  ASSERT_EQ(first.hits.size(), 1u);
  EXPECT_EQ(first.hits[0].theta, want.front());
  EXPECT_LE(first.evaluations, all.evaluations);
}

TEST(Attack, Soundness) {
  const auto face = rsf::synth_face(6, 120, 96);
  rsf::FringeDetectorStub det(stub_opts(6));
  auto model = model25();
  model.randomize_phase = true;
  model.seed = 99;
  auto s = space(12, 12, 90, SearchMode::CollectAll);
  s.max_iters = 2;
  const auto r = rsf::grid_search_dos(face, s, det, model);
  ASSERT_FALSE(r.hits.empty());
  for (const auto& h : r.hits) {
    const double tp = (h.theta.width_rows + h.theta.interval_rows) * 25;
    EXPECT_GE(h.phase_us, 0.0);
    EXPECT_LT(h.phase_us, tp);
    const auto again = oracle::captured(face, h.theta.width_rows, h.theta.interval_rows, h.theta.tilt_deg,
                                        model.sensor, h.phase_us);
    EXPECT_EQ(det.detect(again).label, 0);
  }
}

TEST(Attack, IterationsOnlyWithRandomPhase) {
  const auto face = rsf::synth_face(1, 64, 64);
  AlwaysPresent det;
  auto s = space(3, 3, 0, SearchMode::CollectAll);
  s.max_iters = 4;
  auto model = model25();
  EXPECT_EQ(rsf::grid_search_dos(face, s, det, model).evaluations, 9u);
  model.randomize_phase = true;
  EXPECT_EQ(rsf::grid_search_dos(face, s, det, model).evaluations, 36u);
  EXPECT_LE(36u, s.max_iters * 3 * 3 * 1);
}

TEST(Attack, Deterministic) {
  const auto face = rsf::synth_face(2, 100, 80);
  rsf::FringeDetectorStub det(stub_opts(5));
  auto model = model25();
  model.randomize_phase = true;
  model.seed = 5;
  auto s = space(10, 10, 90, SearchMode::CollectAll);
  s.max_iters = 2;
  const auto a = rsf::grid_search_dos(face, s, det, model);
  const auto b = rsf::grid_search_dos(face, s, det, model);
  ASSERT_EQ(a.hits.size(), b.hits.size());
  for (std::size_t k = 0; k < a.hits.size(); ++k) {
    EXPECT_EQ(a.hits[k].theta, b.hits[k].theta);
    EXPECT_EQ(a.hits[k].phase_us, b.hits[k].phase_us);
  }
  EXPECT_EQ(a.evaluations, b.evaluations);
  model.seed = 6;
  const auto c = rsf::grid_search_dos(face, s, det, model);
  bool phase_differs = false;
  for (std::size_t k = 0; k < std::min(a.hits.size(), c.hits.size()); ++k)
    phase_differs |= a.hits[k].phase_us != c.hits[k].phase_us;
  EXPECT_TRUE(phase_differs);
}

TEST(Attack, ParallelMatchesSerial) {
  const auto face = rsf::synth_face(8, 120, 96);
  rsf::FringeDetectorStub shared(stub_opts(8));
  const auto model = model25();
  for (auto mode : {SearchMode::CollectAll, SearchMode::FirstHit}) {
    const auto s = space(14, 14, 90, mode);
    const auto serial = rsf::grid_search_dos(face, s, shared, model);
    const auto threaded = rsf::grid_search_dos(face, s, rsf::OraclePool<rsf::Detector>{{&shared}, 4}, model);
    EXPECT_EQ(serial.thetas(), threaded.thetas());
    EXPECT_EQ(serial.evaluations, threaded.evaluations);

    rsf::FringeDetectorStub w0(stub_opts(8)), w1(stub_opts(8)), w2(stub_opts(8));
    const auto pooled = rsf::grid_search_dos(face, s, rsf::OraclePool<rsf::Detector>{{&w0, &w1, &w2}, 3}, model);
    EXPECT_EQ(serial.thetas(), pooled.thetas());
    EXPECT_EQ(serial.evaluations, pooled.evaluations);
  }
}

TEST(Attack, AbortCarriesPartialHits) {
  const auto face = rsf::synth_face(4, 120, 96);
  const auto model = model25();
  const auto s = space(16, 16, 90, SearchMode::CollectAll);
  rsf::FringeDetectorStub stub(stub_opts(8));
  const auto full = rsf::grid_search_dos(face, s, stub, model);
  const auto grid = s.grid();
  // Call 1 is the precondition; call k + 2 evaluates grid point k.
  const std::size_t fail_idx = 400;
  FailingDetector det(stub_opts(8), static_cast<int>(fail_idx + 2));
  try {
    rsf::grid_search_dos(face, s, det, model);
    FAIL() << "expected abort";
  } catch (const rsf::AttackAborted& e) {
    EXPECT_EQ(e.failing_theta(), grid[fail_idx]);
    std::vector<PerturbationParams> before;
    for (const auto& t : full.thetas()) {
      const auto pos = std::find(grid.begin(), grid.end(), t) - grid.begin();
      if (static_cast<std::size_t>(pos) < fail_idx) before.push_back(t);
    }
    EXPECT_EQ(e.partial().thetas(), before);
    EXPECT_FALSE(before.empty());
    EXPECT_STREQ(e.what(), "oracle crashed");
  }
}

TEST(Attack, PerceptibleThetasSkipped) {
  const auto face = rsf::synth_face(0, 64, 64);
  CleanOnly det(face);
  auto s = space(199, 199, 0, SearchMode::CollectAll);
  s.b_step = 99;
  s.s_step = 99;
  const auto r = rsf::grid_search_dos(face, s, det, model25());
  for (const auto& t : r.thetas()) EXPECT_LT((t.width_rows + t.interval_rows) * 25, 5000);
  for (const auto& t : r.skipped_perceptible) EXPECT_GE((t.width_rows + t.interval_rows) * 25, 5000);
  EXPECT_EQ(r.hits.size() + r.skipped_perceptible.size(), 9u);
  EXPECT_EQ(r.skipped_perceptible.size(), 6u);
  EXPECT_EQ(r.evaluations, 3u);
  EXPECT_EQ(det.calls.load(), 4);
}

TEST(Dodging, EveryPointVerifyingReturnsWholeGrid) {
  const auto x = rsf::synth_face(1, 96, 64);
  const auto u = rsf::synth_face(2, 96, 64);
  Collapsing emb(x, u);
  const double d0 = std::sqrt(2.0);
  const auto s = space(6, 6, 90, SearchMode::CollectAll);
  const auto r = rsf::grid_search_dodging(x, u, s, emb, 0.5 * d0, model25());
  EXPECT_EQ(r.thetas(), s.grid());
  EXPECT_EQ(r.evaluations, 6u * 6u * 3u);
  for (const auto& h : r.hits) EXPECT_EQ(h.loss, 0.0);
  EXPECT_THROW(rsf::grid_search_dodging(x, u, s, emb, d0, model25()), rsf::PreconditionError);
}

TEST(Dodging, SameFaceIsPrecondition) {
  const auto x = rsf::synth_face(1, 96, 64);
  rsf::ProfileEmbedderStub emb(16);
  EXPECT_THROW(rsf::grid_search_dodging(x, x, space(3, 3, 0, SearchMode::FirstHit), emb, 0.01, model25()),
               rsf::PreconditionError);
  EXPECT_THROW(rsf::grid_search_dodging(x, rsf::synth_face(1, 64, 64), space(3, 3, 0, SearchMode::FirstHit), emb,
                                        0.01, model25()),
               std::invalid_argument);
  EXPECT_THROW(rsf::grid_search_dodging(x, rsf::synth_face(2, 96, 64), space(3, 3, 0, SearchMode::FirstHit), emb,
                                        0.0, model25()),
               std::invalid_argument);
}

TEST(Dodging, MidpointDeltaMatchesBruteForce) {
  const auto x = rsf::synth_face(1, 120, 96);
  const auto u = rsf::synth_face(2, 120, 96);
  rsf::ProfileEmbedderStub emb(16);
  const auto model = model25();
  const double d0 = rsf::feature_distance(emb.embed(x), emb.embed(u));
  auto dist = [&](double b, double s, double a) {
    return rsf::feature_distance(emb.embed(oracle::captured(x, b, s, a, model.sensor)),
                                 emb.embed(oracle::captured(u, b, s, a, model.sensor)));
  };
  double dmin = d0;
  for (double b : oracle::values({1, 10, 1}))
    for (double s : oracle::values({1, 10, 1}))
      for (double a : {0.0, 45.0, 90.0}) dmin = std::min(dmin, dist(b, s, a));
  ASSERT_LT(dmin, d0);
  const double delta = 0.5 * (d0 + dmin);
  const auto want = as_thetas(
      oracle::satisfying({1, 10, 1}, {1, 10, 1}, {0, 90, 45}, 25, [&](double b, double s, double a) { return dist(b, s, a) <= delta; }));
  const auto r = rsf::grid_search_dodging(x, u, space(10, 10, 90, SearchMode::CollectAll), emb, delta, model);
  EXPECT_EQ(r.thetas(), want);
  for (const auto& h : r.hits) EXPECT_LE(h.loss, delta);
  const auto first = rsf::grid_search_dodging(x, u, space(10, 10, 90, SearchMode::FirstHit), emb, delta, model);
  ASSERT_EQ(first.hits.size(), 1u);
  EXPECT_EQ(first.hits[0].theta, want.front());
}

TEST(Capture, NormalizedToFullScale) {
  rsf::CaptureModel m;
  m.sensor.interline_delay_us = 1;
  m.sensor.exposure_us = 1;
  m.sensor.gain = 3;
  const rsf::Image flat(8, 4, 1, 0.5);
  const auto y = rsf::capture(flat, PerturbationParams{2, 2, 0}, m, 0.0);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(y.at(i, 0), (i % 4) < 2 ? 0.5 : 0.0);
}
