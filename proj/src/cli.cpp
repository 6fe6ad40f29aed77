#include "rsflicker/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rsflicker/adapter_bridge.hpp"
#include "rsflicker/attack.hpp"
#include "rsflicker/codec.hpp"
#include "rsflicker/defense.hpp"
#include "rsflicker/manifest.hpp"
#include "rsflicker/perturb.hpp"
#include "rsflicker/report.hpp"
#include "rsflicker/sensor.hpp"
#include "rsflicker/sweep.hpp"
#include "rsflicker/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace rsf {
namespace {

struct Input {
  std::string stem;
  fs::path source;  // empty for synthetic faces
  Image image;
};

struct SensorOpts {
  double td = 0.0;
  double te = 250.0;
  std::optional<double> gain;
  double t0 = 0.0;

  void add(CLI::App& app, bool td_required) {
    auto* o = app.add_option("--td", td, "interline delay t_d in microseconds");
    if (td_required) o->required();
    app.add_option("--te", te, "exposure duration t_e in microseconds")->capture_default_str();
    app.add_option("--gain", gain, "conversion gain k (default 1)");
    app.add_option("--t0", t0, "exposure start of row 0 in microseconds")->capture_default_str();
  }
  SensorConfig make(std::size_t rows, std::size_t cols) const {
    SensorConfig s{td, te, gain.value_or(1.0), rows, cols, t0};
    s.validate();
    return s;
  }
};

struct LightOpts {
  double on = 1.0;
  double off = 0.0;
  double phase = 0.0;
  bool randomize = false;

  void add(CLI::App& app) {
    app.add_option("--level-on", on, "relative luminance of the on state")->capture_default_str();
    app.add_option("--level-off", off, "relative luminance of the off state")->capture_default_str();
    app.add_option("--phase", phase, "LED phase offset in microseconds")->capture_default_str();
    app.add_flag("--randomize-phase", randomize, "draw the LED phase per capture from --seed");
  }
};

struct InputOpts {
  std::vector<std::string> images;
  std::vector<std::uint64_t> synth;
  std::string size = "240x320";

  void add(CLI::App& app, const std::string& what) {
    app.add_option("--image", images, what);
    app.add_option("--synth", synth, "synthetic face seed(s) instead of --image")->delimiter(',');
    app.add_option("--size", size, "synthetic face size ROWSxCOLS")->capture_default_str();
  }

  std::vector<Input> load() const {
    std::vector<Input> out;
    for (const auto& p : images) {
      Image img = load_image(p);
      out.push_back({fs::path(p).stem().string(), p, std::move(img)});
    }
    if (!synth.empty()) {
      const auto x = size.find('x');
      if (x == std::string::npos) throw std::invalid_argument("--size must be ROWSxCOLS");
      const auto rows = std::stoul(size.substr(0, x));
      const auto cols = std::stoul(size.substr(x + 1));
      for (auto seed : synth) out.push_back({"synth-" + std::to_string(seed), {}, synth_face(seed, rows, cols)});
    }
    if (out.empty()) throw std::invalid_argument("no input image: give --image or --synth");
    return out;
  }
};

struct OracleOpts {
  std::string oracle = "stub";
  std::string adapter;
  double band_begin = 0.4;
  double band_end = 0.6;
  double dark_thresh = 0.5;
  std::size_t min_run = 15;
  std::size_t embed_dim = 16;
  std::size_t jobs = 1;

  void add(CLI::App& app) {
    app.add_option("--oracle", oracle, "stub | external")->check(CLI::IsMember({"stub", "external"}))->capture_default_str();
    app.add_option("--adapter", adapter, "adapter command line for --oracle external");
    app.add_option("--band-begin", band_begin, "stub detector band start (fraction of rows)")->capture_default_str();
    app.add_option("--band-end", band_end, "stub detector band end (fraction of rows)")->capture_default_str();
    app.add_option("--dark-thresh", dark_thresh, "stub detector darkness fraction")->capture_default_str();
    app.add_option("--min-run", min_run, "stub detector minimum dark run in rows")->capture_default_str();
    app.add_option("--embed-dim", embed_dim, "embedding dimension")->capture_default_str();
    app.add_option("--jobs", jobs, "parallel workers (adapter processes for --oracle external)")->capture_default_str();
  }

  void check() const {
    if (oracle == "external" && adapter.empty()) throw std::invalid_argument("--oracle external needs --adapter");
    if (oracle == "stub" && !adapter.empty()) throw std::invalid_argument("--adapter requires --oracle external");
    if (jobs == 0) throw std::invalid_argument("--jobs must be at least 1");
  }

  std::vector<std::string> adapter_argv() const {
    std::istringstream in(adapter);
    std::vector<std::string> argv;
    for (std::string tok; in >> tok;) argv.push_back(tok);
    return argv;
  }

  std::vector<std::unique_ptr<Detector>> detectors() const {
    check();
    std::vector<std::unique_ptr<Detector>> out;
    if (oracle == "stub") {
      out.push_back(std::make_unique<FringeDetectorStub>(
          FringeDetectorStub::Options{band_begin, band_end, dark_thresh, min_run}));
    } else {
      for (std::size_t k = 0; k < jobs; ++k)
        out.push_back(std::make_unique<ExternalDetector>(AdapterOptions::from_env(adapter_argv())));
    }
    return out;
  }

  std::vector<std::unique_ptr<Embedder>> embedders() const {
    check();
    std::vector<std::unique_ptr<Embedder>> out;
    if (oracle == "stub") {
      out.push_back(std::make_unique<ProfileEmbedderStub>(embed_dim));
    } else {
      for (std::size_t k = 0; k < jobs; ++k)
        out.push_back(std::make_unique<ExternalEmbedder>(AdapterOptions::from_env(adapter_argv()), embed_dim));
    }
    return out;
  }

  json echo() const {
    return {{"oracle", oracle},       {"adapter", adapter},         {"band_begin", band_begin},
            {"band_end", band_end},   {"dark_thresh", dark_thresh}, {"min_run", min_run},
            {"embed_dim", embed_dim}, {"jobs", jobs}};
  }
};

struct SpaceOpts {
  SearchSpace space;
  std::string mode = "first-hit";

  void add(CLI::App& app) {
    app.add_option("--iters", space.max_iters, "outer iterations c")->capture_default_str();
    app.add_option("--b-max", space.b_max, "maximum fringe width in rows")->capture_default_str();
    app.add_option("--s-max", space.s_max, "maximum fringe interval in rows")->capture_default_str();
    app.add_option("--alpha-max", space.alpha_max, "maximum tilt in degrees")->capture_default_str();
    app.add_option("--b-step", space.b_step)->capture_default_str();
    app.add_option("--s-step", space.s_step)->capture_default_str();
    app.add_option("--alpha-step", space.alpha_step)->capture_default_str();
    app.add_option("--mode", mode, "first-hit | collect-all")->capture_default_str();
  }
  SearchSpace make() const {
    SearchSpace s = space;
    s.mode = parse_search_mode(mode);
    s.validate();
    return s;
  }
};

template <class T>
std::vector<T*> raw(const std::vector<std::unique_ptr<T>>& v) {
  std::vector<T*> out;
  for (const auto& p : v) out.push_back(p.get());
  return out;
}

fs::path prepare_out(const std::string& out) {
  fs::path dir = out.empty() ? fs::path(".") : fs::path(out);
  fs::create_directories(dir);
  return dir;
}

std::string image_ext(const Input& in) {
  if (in.source.empty()) return in.image.channels() == 3 ? ".ppm" : ".pgm";
  std::string ext = in.source.extension().string();
  return ext.empty() ? ".pgm" : ext;
}

json run_echo(int argc, char** argv, json params) {
  json args = json::array();
  for (int k = 0; k < argc; ++k) args.push_back(argv[k]);
  return {{"argv", args}, {"parameters", std::move(params)}};
}

// simulate ------------------------------------------------------------------

struct SimulateCmd {
  InputOpts inputs;
  SensorOpts sensor;
  LightOpts light;
  std::string theta;
  std::optional<double> period;
  double duty = 0.5;
  double tilt = 0.0;
  std::string out;
  bool raw_output = false;
  std::uint64_t seed = 0;

  void add(CLI::App& app) {
    inputs.add(app, "input image (PGM/PPM/PNG)");
    sensor.add(app, true);
    light.add(app);
    app.add_option("--theta", theta, "fringe parameters b,s,alpha");
    app.add_option("--period", period, "pulse period in microseconds (alternative to --theta)");
    app.add_option("--duty", duty, "duty cycle with --period")->capture_default_str();
    app.add_option("--tilt", tilt, "tilt in degrees with --period")->capture_default_str();
    app.add_option("--out", out, "output directory (default: next to the input)");
    app.add_flag("--raw", raw_output, "write X o R without normalizing by k * level_on * t_e");
    app.add_option("--seed", seed, "seed for --randomize-phase")->capture_default_str();
  }

  int run(int argc, char** argv) {
    if (theta.empty() == !period.has_value()) throw std::invalid_argument("give exactly one of --theta or --period");
    const auto inputs_loaded = inputs.load();
    for (const auto& in : inputs_loaded) {
      const SensorConfig cfg = sensor.make(in.image.rows(), in.image.cols());
      double phase = light.phase;
      if (light.randomize) {
        std::mt19937_64 gen(seed);
        phase = static_cast<double>(gen() >> 11) * 0x1.0p-53;  // scaled by Tp below
      }
      PulseParams pulse;
      PerturbationParams th;
      if (!theta.empty()) {
        th = parse_theta(theta);
        pulse = theta_to_signal(th, cfg, {light.on, light.off}, 0.0);
      } else {
        pulse = PulseParams::make(*period, duty, 0.0, light.on, light.off);
        const auto geo = pulse_to_fringe(pulse.period_us, pulse.duty, cfg.interline_delay_us);
        th = {geo.width_rows, geo.interval_rows, tilt};
        th.validate();
      }
      pulse = PulseParams::make(pulse.period_us, pulse.duty, light.randomize ? phase * pulse.period_us : phase,
                                pulse.level_on, pulse.level_off);

      const Pattern pat = render_pattern(cfg, pulse, th.tilt_deg);
      Image adv = expose(in.image, pat);
      const double norm = raw_output ? 1.0 : pat.full_scale();
      if (!raw_output)
        for (double& v : adv.data()) v /= norm;

      const fs::path dir = prepare_out(out.empty() && !in.source.empty() ? in.source.parent_path().string() : out);
      const std::string ext = image_ext(in);
      const fs::path adv_path = dir / (in.stem + ".adv" + ext);
      save_image(adv, adv_path);
      save_image(pattern_preview(pat), dir / (in.stem + ".pattern.pgm"));
      write_json(dir / (in.stem + ".pattern.json"), json(pat));

      const bool imperceptible = check_imperceptible(pulse);
      json params = {{"input", in.source.empty() ? in.stem : in.source.string()},
                     {"sensor", cfg},
                     {"pulse", pulse},
                     {"theta", th},
                     {"normalization", norm},
                     {"imperceptible", imperceptible},
                     {"frequency_hz", pulse.frequency_hz()},
                     {"seed", seed},
                     {"outputs", {adv_path.string()}}};
      if (!imperceptible) {
        params["warning"] = "flicker at " + std::to_string(pulse.frequency_hz()) +
                            " Hz is at or below the 200 Hz visibility threshold";
        std::cerr << "warning: " << params["warning"].get<std::string>() << "\n";
      }
      write_json(dir / (in.stem + ".simulate.json"), run_echo(argc, argv, params));
      std::cout << adv_path.string() << "\n";
    }
    return kExitOk;
  }
};

// attack-dos / attack-dodge -------------------------------------------------

struct AttackCmd {
  bool dodge = false;
  InputOpts inputs;
  std::string user_image;
  std::optional<std::uint64_t> user_synth;
  SensorOpts sensor;
  LightOpts light;
  OracleOpts oracle;
  SpaceOpts space;
  std::optional<double> delta;
  std::vector<double> pulse_periods;
  double duty = 0.5;
  std::string out;
  std::uint64_t seed = 0;

  void add(CLI::App& app) {
    inputs.add(app, dodge ? "attacker face image X" : "face image X");
    if (dodge) {
      app.add_option("--user", user_image, "legitimate user face image U");
      app.add_option("--user-synth", user_synth, "synthetic face seed for U");
      app.add_option("--delta", delta, "verification threshold")->required();
    }
    sensor.add(app, true);
    light.add(app);
    oracle.add(app);
    space.add(app);
    app.add_option("--pulse-periods", pulse_periods, "sweep these pulse periods (us) instead of searching")
        ->delimiter(',');
    app.add_option("--duty", duty, "duty cycle for --pulse-periods")->capture_default_str();
    app.add_option("--out", out, "output directory")->capture_default_str();
    app.add_option("--seed", seed, "seed for --randomize-phase")->capture_default_str();
  }

  json echo(const SensorConfig& cfg, const SearchSpace& sp) const {
    json j = {{"command", dodge ? "attack-dodge" : "attack-dos"},
              {"sensor", cfg},
              {"levels", {{"on", light.on}, {"off", light.off}}},
              {"phase_us", light.phase},
              {"randomize_phase", light.randomize},
              {"seed", seed},
              {"space", to_json(sp)},
              {"oracle", oracle.echo()}};
    if (delta) j["delta"] = *delta;
    if (!pulse_periods.empty()) j["pulse_periods"] = pulse_periods;
    return j;
  }

  int run(int argc, char** argv) {
    oracle.check();
    const auto xs = inputs.load();
    const fs::path dir = prepare_out(out);
    const std::string stem = dodge ? "attack_dodge" : "attack_dos";
    const SearchSpace sp = space.make();
    const SensorConfig cfg = sensor.make(xs.front().image.rows(), xs.front().image.cols());

    std::optional<Image> user;
    if (dodge) {
      if (!user_image.empty() == user_synth.has_value())
        throw std::invalid_argument("give exactly one of --user or --user-synth");
      user = user_image.empty() ? InputOpts{{}, {*user_synth}, inputs.size}.load().front().image
                                : load_image(user_image);
    }

    if (!pulse_periods.empty()) return run_sweep(argc, argv, xs, user, cfg, sp, dir, stem);

    CaptureModel model{cfg, {light.on, light.off}, light.phase, light.randomize, seed};
    const Image& x = xs.front().image;
    write_json(dir / (stem + ".run.json"), run_echo(argc, argv, echo(cfg, sp)));
    AttackResult result;
    try {
      if (dodge) {
        auto pool = oracle.embedders();
        result = grid_search_dodging(x, *user, sp, OraclePool<Embedder>{raw(pool), oracle.jobs}, *delta, model);
      } else {
        auto pool = oracle.detectors();
        result = grid_search_dos(x, sp, OraclePool<Detector>{raw(pool), oracle.jobs}, model);
      }
    } catch (const AttackAborted& e) {
      json report = to_json(e.partial());
      report["aborted"] = {{"reason", e.what()}, {"failing_theta", e.failing_theta()}};
      write_json(dir / (stem + ".json"), report);
      write_text(dir / (stem + ".csv"), attack_csv(e.partial()));
      std::cerr << "error: oracle failed: " << e.what() << "\n";
      return kExitOracle;
    }
    write_json(dir / (stem + ".json"), to_json(result));
    write_text(dir / (stem + ".csv"), attack_csv(result));
    std::cout << result.hits.size() << " theta found in " << result.evaluations << " evaluations ("
              << result.skipped_perceptible.size() << " skipped as perceptible)\n";
    return result.hits.empty() ? kExitFailure : kExitOk;
  }

  int run_sweep(int argc, char** argv, const std::vector<Input>& xs, const std::optional<Image>& user,
                const SensorConfig& cfg, const SearchSpace& sp, const fs::path& dir, const std::string& stem) {
    write_json(dir / (stem + ".run.json"), run_echo(argc, argv, echo(cfg, sp)));
    const auto conds = pulse_period_conditions(pulse_periods, duty, {light.on, light.off});
    std::vector<SweepRow> rows;
    if (dodge) {
      auto pool = oracle.embedders();
      std::vector<std::pair<Image, Image>> pairs;
      for (const auto& in : xs) pairs.emplace_back(in.image, *user);
      rows = dodging_sweep(pairs, conds, cfg, *pool.front(), *delta, pool.front()->name());
    } else {
      auto pool = oracle.detectors();
      std::vector<Image> faces;
      for (const auto& in : xs) faces.push_back(in.image);
      rows = dos_sweep(faces, conds, cfg, *pool.front(), pool.front()->name());
    }
    write_text(dir / (stem + ".sweep.csv"), sweep_csv(rows));
    write_json(dir / (stem + ".sweep.json"), to_json(rows));
    std::cout << sweep_csv(rows);
    return kExitOk;
  }
};

// defend --------------------------------------------------------------------

struct DefendCmd {
  InputOpts inputs;
  std::string manifest;
  std::optional<double> f0;
  std::optional<double> bandwidth;
  int order = 4;
  int harmonics = 3;
  double tilt = 0.0;
  std::optional<double> td;
  OracleOpts oracle;
  std::string out;

  void add(CLI::App& app) {
    inputs.add(app, "adversarial image(s) to repair");
    app.add_option("--manifest", manifest, "batch mode: manifest of adversarial captures");
    app.add_option("--f0", f0, "fringe frequency in cycles/row (default: estimated)");
    app.add_option("--bandwidth", bandwidth, "stop-band width in cycles/row (default f0/4)");
    app.add_option("--order", order, "Butterworth order")->capture_default_str();
    app.add_option("--harmonics", harmonics, "harmonics to notch")->capture_default_str();
    app.add_option("--tilt", tilt, "known fringe tilt in degrees")->capture_default_str();
    app.add_option("--td", td, "interline delay; with a manifest, f0 = t_d / Tp of each entry");
    oracle.add(app);
    app.add_option("--out", out, "output directory")->capture_default_str();
  }

  FilterSpec spec_for(const Image& img, std::optional<double> known_f0) const {
    const double center = known_f0 ? *known_f0 : estimate_fringe_frequency(img);
    FilterSpec s = FilterSpec::tuned(center, tilt);
    if (bandwidth) s.bandwidth_cpr = *bandwidth;
    s.order = order;
    s.harmonics = harmonics;
    s.validate();
    return s;
  }

  int run(int argc, char** argv) {
    const fs::path dir = prepare_out(out);
    if (!manifest.empty()) return run_batch(argc, argv, dir);
    for (const auto& in : inputs.load()) {
      const FilterSpec spec = spec_for(in.image, f0);
      const Image repaired = butterworth_notch(in.image, spec);
      const fs::path img_path = dir / (in.stem + ".repaired" + image_ext(in));
      save_image(repaired, img_path);
      json report = {{"input", in.source.empty() ? in.stem : in.source.string()},
                     {"f0", spec.center_cpr},
                     {"f0_estimated", !f0.has_value()},
                     {"spec", spec},
                     {"suppression_db", suppression_db(in.image, repaired, spec.center_cpr)},
                     {"output", img_path.string()}};
      write_json(dir / (in.stem + ".defend.json"), run_echo(argc, argv, report));
      std::cout << img_path.string() << "\n";
    }
    return kExitOk;
  }

  int run_batch(int argc, char** argv, const fs::path& dir) {
    const Manifest m = load_manifest(manifest);
    if (m.entries.empty()) throw std::invalid_argument("manifest has no entries");
    auto pool = oracle.detectors();
    Detector& det = *pool.front();
    std::size_t excluded = 0;
    std::vector<SweepRow> rows;
    SweepRow row{det.name(), "butterworth"};
    json members = json::array();
    for (const auto& e : m.entries) {
      const Image img = load_image(e.path);
      std::optional<double> known = f0;
      if (!known && e.condition && td) known = *td / e.condition->period_us;
      if (det.detect(img).label != 0) {
        ++excluded;
        continue;
      }
      const FilterSpec spec = spec_for(img, known);
      const bool flipped = det.detect(butterworth_notch(img, spec)).label == 1;
      ++row.n_b;
      if (flipped) ++row.n_a;
      members.push_back({{"path", e.path.string()}, {"f0", spec.center_cpr}, {"defended", flipped}});
    }
    if (row.n_b == 0) throw PreconditionError("no manifest entry is a successful adversarial example");
    row.rate = static_cast<double>(row.n_a) / static_cast<double>(row.n_b);
    rows.push_back(row);
    rows.push_back({det.name(), "learning-based inpainting (not implemented)", 0, 0, 0.0});
    write_text(dir / "defense.csv", sweep_csv(rows));
    json report = {{"rows", to_json(rows)},
                   {"members", members},
                   {"excluded_not_adversarial", excluded},
                   {"learning_based_inpainting", "not implemented"},
                   {"oracle", oracle.echo()},
                   {"filter", {{"order", order}, {"harmonics", harmonics}, {"tilt_deg", tilt}}}};
    write_json(dir / "defense.json", run_echo(argc, argv, report));
    std::cout << sweep_csv(rows);
    return kExitOk;
  }
};

// sweep ---------------------------------------------------------------------

struct SweepCmd {
  std::string kind = "dos";
  InputOpts inputs;
  SensorOpts sensor;
  LightOpts light;
  OracleOpts oracle;
  std::vector<double> pulse_periods;
  std::vector<double> scales;
  std::vector<double> tilts;
  double period = 1000.0;
  double duty = 0.5;
  std::optional<double> delta;
  std::string out;

  void add(CLI::App& app) {
    app.add_option("--kind", kind, "dos | dodge")->check(CLI::IsMember({"dos", "dodge"}))->capture_default_str();
    inputs.add(app, "face image(s)");
    sensor.add(app, true);
    light.add(app);
    oracle.add(app);
    app.add_option("--pulse-periods", pulse_periods, "pulse periods in microseconds")->delimiter(',');
    app.add_option("--scales", scales, "image scale factors (shooting-distance proxy)")->delimiter(',');
    app.add_option("--tilts", tilts, "camera tilt angles in degrees")->delimiter(',');
    app.add_option("--period", period, "pulse period for --scales/--tilts")->capture_default_str();
    app.add_option("--duty", duty, "duty cycle")->capture_default_str();
    app.add_option("--delta", delta, "verification threshold for --kind dodge");
    app.add_option("--out", out, "output directory")->capture_default_str();
  }

  int run(int argc, char** argv) {
    const int axes = !pulse_periods.empty() + !scales.empty() + !tilts.empty();
    if (axes != 1) throw std::invalid_argument("give exactly one of --pulse-periods, --scales, --tilts");
    if (kind == "dodge" && !delta) throw std::invalid_argument("--kind dodge needs --delta");
    const fs::path dir = prepare_out(out);
    const auto xs = inputs.load();
    const SensorConfig cfg = sensor.make(xs.front().image.rows(), xs.front().image.cols());
    const PulseParams base = PulseParams::make(period, duty, light.phase, light.on, light.off);
    std::vector<SweepCondition> conds;
    if (!pulse_periods.empty()) conds = pulse_period_conditions(pulse_periods, duty, {light.on, light.off});
    if (!scales.empty()) conds = scale_conditions(scales, base);
    if (!tilts.empty()) conds = tilt_conditions(tilts, base);

    std::vector<SweepRow> rows;
    if (kind == "dos") {
      auto pool = oracle.detectors();
      std::vector<Image> faces;
      for (const auto& in : xs) faces.push_back(in.image);
      rows = dos_sweep(faces, conds, cfg, *pool.front(), pool.front()->name());
    } else {
      if (xs.size() < 2) throw std::invalid_argument("dodging sweep needs at least two faces");
      auto pool = oracle.embedders();
      std::vector<std::pair<Image, Image>> pairs;
      for (std::size_t a = 0; a < xs.size(); ++a)
        for (std::size_t b = a + 1; b < xs.size(); ++b) pairs.emplace_back(xs[a].image, xs[b].image);
      rows = dodging_sweep(pairs, conds, cfg, *pool.front(), *delta, pool.front()->name());
    }
    json params = {{"kind", kind},   {"sensor", cfg},          {"base_pulse", base},
                   {"oracle", oracle.echo()}, {"conditions", json::array()}};
    for (const auto& c : conds)
      params["conditions"].push_back({{"label", c.label}, {"pulse", c.pulse}, {"tilt_deg", c.tilt_deg}, {"scale", c.scale}});
    if (delta) params["delta"] = *delta;
    write_json(dir / "sweep.run.json", run_echo(argc, argv, params));
    write_text(dir / "sweep.csv", sweep_csv(rows));
    write_json(dir / "sweep.json", to_json(rows));
    std::cout << sweep_csv(rows);
    return kExitOk;
  }
};

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Rolling-shutter LED flicker attack simulator"};
  app.require_subcommand(1);

  SimulateCmd simulate;
  AttackCmd dos;
  AttackCmd dodge;
  dodge.dodge = true;
  DefendCmd defend;
  SweepCmd sweep;
  simulate.add(*app.add_subcommand("simulate", "render adversarial captures for given fringe parameters"));
  dos.add(*app.add_subcommand("attack-dos", "grid-search fringe parameters that hide the face from the detector"));
  dodge.add(*app.add_subcommand("attack-dodge", "grid-search fringe parameters that make two faces verify as one"));
  defend.add(*app.add_subcommand("defend", "repair captures with a Butterworth notch filter"));
  sweep.add(*app.add_subcommand("sweep", "success-rate tables over pulse period, scale or tilt"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    const auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "simulate") return simulate.run(argc, argv);
    if (name == "attack-dos") return dos.run(argc, argv);
    if (name == "attack-dodge") return dodge.run(argc, argv);
    if (name == "defend") return defend.run(argc, argv);
    return sweep.run(argc, argv);
  } catch (const AdapterError& e) {
    std::cerr << "error: oracle " << to_string(e.kind()) << ": " << e.what() << "\n";
    return kExitOracle;
  } catch (const CodecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace rsf
