#pragma once

// Empirical stability from simulated trajectories: successive minima of
// log x4 grow (stable cycle) or shrink (unstable cycle) by about a factor
// delta per turn, and so do the intervals between them.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "hetcycle/errors.hpp"
#include "hetcycle/integrate.hpp"
#include "hetcycle/io.hpp"
#include "hetcycle/model.hpp"
#include "hetcycle/presets.hpp"
#include "hetcycle/stability.hpp"

namespace hetcycle {

struct MinimaSeries {
  std::vector<Minimum> minima;

  std::size_t size() const { return minima.size(); }

  /// rho_n = m_{n+1} / m_n
  std::vector<double> ratios() const {
    std::vector<double> out;
    for (std::size_t n = 0; n + 1 < minima.size(); ++n)
      if (minima[n].u != 0.0) out.push_back(minima[n + 1].u / minima[n].u);
    return out;
  }

  /// tau_n = (t_{n+2} - t_{n+1}) / (t_{n+1} - t_n)
  std::vector<double> interval_ratios() const {
    std::vector<double> out;
    for (std::size_t n = 0; n + 2 < minima.size(); ++n)
      out.push_back((minima[n + 2].t - minima[n + 1].t) / (minima[n + 1].t - minima[n].t));
    return out;
  }

  /// Minima `first`..`last`, 1-based and inclusive, clipped to what exists.
  MinimaSeries window(std::size_t first, std::size_t last) const {
    MinimaSeries w;
    for (std::size_t n = first; n <= last && n <= minima.size(); ++n) w.minima.push_back(minima[n - 1]);
    return w;
  }
};

inline double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

struct RatioEstimate {
  double ratio;
  double interval_ratio;  // NaN with fewer than three minima
};

/// Medians of the last K minima ratios and of the last (up to K) interval ratios.
inline RatioEstimate minima_ratios(const MinimaSeries& s, std::size_t tail) {
  if (tail == 0) throw InputError("tail length must be positive");
  if (s.size() < tail + 1) {
    throw AnalysisError("need at least " + std::to_string(tail + 1) + " minima, have " +
                        std::to_string(s.size()));
  }
  auto last = [](std::vector<double> v, std::size_t k) {
    if (v.size() > k) v.erase(v.begin(), v.end() - static_cast<std::ptrdiff_t>(k));
    return v;
  };
  return {median(last(s.ratios(), tail)), median(last(s.interval_ratios(), tail))};
}

enum class Empirical { stable, unstable, undecided };

inline const char* to_string(Empirical e) {
  switch (e) {
    case Empirical::stable: return "stable";
    case Empirical::unstable: return "unstable";
    case Empirical::undecided: return "undecided";
  }
  return "?";
}

/// Stable if |m_n| strictly increases over the last `window` minima,
/// unstable if it strictly decreases.
inline Empirical empirical_classification(const MinimaSeries& s, std::size_t window) {
  if (s.size() < 3) throw AnalysisError("need at least 3 minima, have " + std::to_string(s.size()));
  const std::size_t w = std::min(std::max<std::size_t>(window, 2), s.size());
  bool up = true, down = true;
  for (std::size_t n = s.size() - w; n + 1 < s.size(); ++n) {
    const double a = std::abs(s.minima[n].u), b = std::abs(s.minima[n + 1].u);
    up = up && b > a;
    down = down && b < a;
  }
  if (up) return Empirical::stable;
  if (down) return Empirical::unstable;
  return Empirical::undecided;
}

struct SimulationConfig {
  IntegratorOptions integrator;
  double t_max = 1e9;
  double ceiling = std::log(1e-3);    // minima at or above are excursion wiggles
  double departure = std::log(1e-1);  // all coordinates above this ends the run
  std::size_t max_minima = 12;
  std::size_t first_minimum = 3;  // estimation window, 1-based inclusive
  std::size_t last_minimum = 8;
  double tolerance = 0.05;
};

inline constexpr const char* kMinimumKind = "min_u4";
inline constexpr const char* kDepartureKind = "departure";

/// Departure from the cycle: every coordinate, u4 last among them in
/// practice, rises above `cfg.departure`. The cycle lies in coordinate
/// subspaces of dimension at most three, so near it some coordinate is small;
/// u4 alone is O(1) at the end of every turn and cannot signal departure.
inline EventSpec departure_event(const SimulationConfig& cfg) {
  EventSpec dep;
  dep.kind = kDepartureKind;
  dep.g = [level = cfg.departure](double, const Vec4& u, const Vec4&) {
    return *std::min_element(u.begin(), u.end()) - level;
  };
  dep.direction = 1;
  dep.terminal_count = 1;
  return dep;
}

struct SimulationResult {
  Trajectory trajectory;
  MinimaSeries minima;
  bool departed = false;
};

/// Log-coordinate start (1, d1, 1e-10, x4) with log10(x4) given.
inline Vec4 standard_start(const ParameterSet& p, double log10_x4) {
  return {0.0, std::log(p["d1"]), -10.0 * std::log(10.0), log10_x4 * std::log(10.0)};
}

inline SimulationResult simulate(const LVSystem& sys, const Vec4& u0, const SimulationConfig& cfg) {
  std::vector<EventSpec> events{minimum_event(3, cfg.ceiling, cfg.max_minima, kMinimumKind)};
  events.push_back(departure_event(cfg));
  SimulationResult res;
  res.trajectory = integrate(sys, LogState{0.0, u0}, cfg.t_max, std::move(events), cfg.integrator);
  for (const auto& e : res.trajectory.events_of(kMinimumKind)) res.minima.minima.push_back({e.t, e.u[3]});
  res.departed = res.trajectory.stopped_by == kDepartureKind;
  return res;
}

struct VerificationVerdict {
  int case_id;
  std::string variant;
  double delta;
  double ratio_estimate;
  double interval_ratio_estimate;
  Prediction predicted;
  Empirical empirical;
  double tolerance;
  bool ratio_agrees;
  bool interval_agrees;
  bool classification_agrees;
  bool agree;
  std::size_t minima_count;
  std::string stop_reason;
};

inline bool within(double estimate, double target, double tol) {
  return std::isfinite(estimate) && std::abs(estimate - target) <= tol * std::abs(target);
}

inline VerificationVerdict verify(const ParameterSet& params, const std::string& variant,
                                  const SimulationResult& sim, const SimulationConfig& cfg) {
  VerificationVerdict v{};
  v.case_id = to_int(params.case_id());
  v.variant = variant;
  v.delta = delta_value(params);
  v.predicted = predict(v.delta);
  v.tolerance = cfg.tolerance;
  v.minima_count = sim.minima.size();
  v.stop_reason = sim.departed ? "departure"
                  : sim.trajectory.status == RunStatus::event_limit ? "max_minima"
                                                                     : to_string(sim.trajectory.status);

  const MinimaSeries w = sim.minima.window(cfg.first_minimum, cfg.last_minimum);
  v.ratio_estimate = std::nan("");
  v.interval_ratio_estimate = std::nan("");
  v.empirical = Empirical::undecided;
  if (w.size() >= 2) {
    const auto est = minima_ratios(w, w.size() - 1);
    v.ratio_estimate = est.ratio;
    v.interval_ratio_estimate = est.interval_ratio;
  }
  if (w.size() >= 3) v.empirical = empirical_classification(w, w.size());

  v.ratio_agrees = within(v.ratio_estimate, v.delta, cfg.tolerance);
  v.interval_agrees = within(v.interval_ratio_estimate, v.delta, cfg.tolerance);
  v.classification_agrees =
      (v.predicted == Prediction::stable && v.empirical == Empirical::stable) ||
      (v.predicted == Prediction::unstable && v.empirical == Empirical::unstable);
  v.agree = v.ratio_agrees && v.interval_agrees && v.classification_agrees;
  return v;
}

inline Json to_json(const VerificationVerdict& v) {
  auto num = [](double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); };
  Json j;
  j["case"] = v.case_id;
  j["variant"] = v.variant;
  j["delta"] = v.delta;
  j["ratio_estimate"] = num(v.ratio_estimate);
  j["interval_ratio_estimate"] = num(v.interval_ratio_estimate);
  j["predicted"] = to_string(v.predicted);
  j["empirical"] = to_string(v.empirical);
  j["tolerance"] = v.tolerance;
  j["agree"] = v.agree;
  return j;
}

/// Grey line: minima predicted from the first measured one, m_{n+1} = delta m_n,
/// and intervals growing by the same factor from the first measured interval.
inline void write_grey_line_csv(std::ostream& os, const MinimaSeries& s, double delta,
                                const ExportOptions& opt = {}) {
  const double scale = opt.log10 ? 1.0 / std::log(10.0) : 1.0;
  os << "n,t_measured,u4_measured,t_predicted,u4_predicted\n";
  if (s.size() == 0) return;
  double t_pred = s.minima[0].t, m_pred = s.minima[0].u;
  double interval = s.size() >= 2 ? s.minima[1].t - s.minima[0].t : 0.0;
  for (std::size_t n = 0; n < s.size(); ++n) {
    os << n + 1 << ',' << csv_number(s.minima[n].t) << ',' << csv_number(s.minima[n].u * scale) << ','
       << csv_number(t_pred) << ',' << csv_number(m_pred * scale) << '\n';
    t_pred += interval;
    interval *= delta;
    m_pred *= delta;
  }
}

/// Compressed sequence of equilibria (0-based) the trajectory passes within
/// `radius` (max norm in x) of.
inline std::vector<std::size_t> visit_sequence(const Trajectory& traj, const ParameterSet& p,
                                               double radius = 0.05) {
  const auto eqs = equilibria(p);
  std::vector<std::size_t> seq;
  for (const auto& s : traj.samples) {
    Vec4 x;
    for (std::size_t k = 0; k < kDim; ++k) x[k] = std::exp(s.u[k]);
    for (const auto& e : eqs) {
      Vec4 d;
      for (std::size_t k = 0; k < kDim; ++k) d[k] = x[k] - e.x[k];
      if (norm_inf(d) < radius && (seq.empty() || seq.back() != e.index)) seq.push_back(e.index);
    }
  }
  return seq;
}

struct ReproductionOutput {
  VerificationVerdict verdict;
  SimulationResult simulation;
  std::vector<std::string> files;
};

/// Run a parameter set from the standard start and write trajectory.csv,
/// minima.csv, grey_line.csv and verdict.json into `out_dir` (if nonempty).
inline ReproductionOutput run_and_report(const ParameterSet& params, const std::string& label,
                                         double log10_x4, const SimulationConfig& cfg,
                                         const std::string& out_dir, const ExportOptions& exp = {}) {
  namespace fs = std::filesystem;
  if (!out_dir.empty()) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec || !fs::is_directory(out_dir))
      throw InputError("cannot create output directory '" + out_dir + "'");
  }
  ReproductionOutput out;
  out.simulation = simulate(assemble_system(params), standard_start(params, log10_x4), cfg);
  out.verdict = verify(params, label, out.simulation, cfg);
  if (out_dir.empty()) return out;

  auto emit = [&](const std::string& name, const std::string& content) {
    const std::string path = (fs::path(out_dir) / name).string();
    write_file(path, content);
    out.files.push_back(path);
  };
  std::ostringstream traj, minima, grey;
  write_trajectory_csv(traj, out.simulation.trajectory, exp);
  write_events_csv(minima, out.simulation.trajectory.events_of(kMinimumKind), exp);
  write_grey_line_csv(grey, out.simulation.minima, out.verdict.delta, exp);
  emit("trajectory.csv", traj.str());
  emit("minima.csv", minima.str());
  emit("grey_line.csv", grey.str());
  emit("verdict.json", to_json(out.verdict).dump(2) + "\n");
  return out;
}

/// One of the eight published runs: its parameters and start depth.
inline ReproductionOutput reproduce_figure(CaseId id, char variant, const SimulationConfig& cfg = {},
                                           const std::string& out_dir = "",
                                           const ExportOptions& exp = {}) {
  const Preset& p = preset(id, variant);
  return run_and_report(p.params, std::string(1, variant), p.log10_x4_initial, cfg, out_dir, exp);
}

}  // namespace hetcycle
