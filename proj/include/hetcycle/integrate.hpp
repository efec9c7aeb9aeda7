#pragma once

// Adaptive Dormand-Prince 5(4) integration in logarithmic coordinates
// u_k = log x_k, with cubic Hermite dense output for event location.
//
// In log coordinates the Lotka-Volterra field becomes u' = r + M exp(u).
// Coordinates far below the smallest double (1e-600 and beyond) are carried
// exactly; exp(u_k) underflowing to zero is the correct limit of x_k -> 0.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "hetcycle/errors.hpp"
#include "hetcycle/linalg.hpp"
#include "hetcycle/model.hpp"

namespace hetcycle {

inline Vec4 log_rhs(const LVSystem& sys, const Vec4& u) {
  Vec4 x;
  for (std::size_t k = 0; k < kDim; ++k) x[k] = std::exp(u[k]);
  return sys.growth(x);
}

struct LogState {
  double t;
  Vec4 u;
};

/// Accepted step endpoint; du is the field value there (used by the interpolant).
struct Sample {
  double t;
  Vec4 u;
  Vec4 du;
};

struct Event {
  std::string kind;
  double t;
  Vec4 u;
};

enum class RunStatus { reached_t_max, event_limit, step_underflow };

inline const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::reached_t_max: return "reached_t_max";
    case RunStatus::event_limit: return "event_limit";
    case RunStatus::step_underflow: return "step_underflow";
  }
  return "?";
}

struct Trajectory {
  std::vector<Sample> samples;
  std::vector<Event> events;
  RunStatus status = RunStatus::reached_t_max;
  std::string stopped_by;  // kind of the terminal event, if any
  std::string message;

  bool failed() const { return status == RunStatus::step_underflow; }

  std::vector<Event> events_of(const std::string& kind) const {
    std::vector<Event> out;
    for (const auto& e : events)
      if (e.kind == kind) out.push_back(e);
    return out;
  }
};

/// Cubic Hermite interpolant between two samples.
inline Vec4 hermite(const Sample& a, const Sample& b, double t) {
  const double h = b.t - a.t;
  const double s = (t - a.t) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  Vec4 u;
  for (std::size_t k = 0; k < kDim; ++k)
    u[k] = h00 * a.u[k] + h10 * h * a.du[k] + h01 * b.u[k] + h11 * h * b.du[k];
  return u;
}

using Field = std::function<Vec4(double, const Vec4&)>;

/// Scalar event function g(t, u, u'). An event fires where g crosses zero in
/// the requested direction; `accept` may veto it (and may keep state, since
/// it sees events in time order).
struct EventSpec {
  std::string kind;
  std::function<double(double, const Vec4&, const Vec4&)> g;
  int direction = 1;  // +1 rising through zero, -1 falling, 0 either
  std::function<bool(const Event&)> accept;
  std::size_t terminal_count = 0;  // stop after this many accepted events; 0 = never
};

inline constexpr double kEventTimeTolerance = 1e-9;

/// Locate g = 0 on [a.t, b.t] by bisection on the interpolated state.
/// g(a) and g(b) must bracket a root.
inline double locate_root(const Sample& a, const Sample& b, const Field& f,
                          const std::function<double(double, const Vec4&, const Vec4&)>& g) {
  double lo = a.t, hi = b.t;
  const double glo = g(a.t, a.u, a.du);
  const bool lo_negative = glo < 0.0;
  const double tol = kEventTimeTolerance * std::max(1.0, std::max(std::abs(a.t), std::abs(b.t)));
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const Vec4 u = hermite(a, b, mid);
    const double gm = g(mid, u, f(mid, u));
    if ((gm < 0.0) == lo_negative) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

inline bool crosses(double g0, double g1, int direction) {
  const bool rising = g0 < 0.0 && g1 >= 0.0;
  const bool falling = g0 > 0.0 && g1 <= 0.0;
  if (direction > 0) return rising;
  if (direction < 0) return falling;
  return rising || falling;
}

struct IntegratorOptions {
  double atol = 1e-10;
  double rtol = 1e-10;
  double max_step = std::numeric_limits<double>::infinity();
  double initial_step = 0.0;  // 0: automatic
  std::size_t max_steps = 100'000'000;
  bool keep_samples = true;  // false keeps only the first and last sample
};

/// Dormand-Prince 5(4) with FSAL, local extrapolation and a standard
/// elementary step controller.
class DormandPrince45 {
 public:
  DormandPrince45(Field f, IntegratorOptions opt) : f_(std::move(f)), opt_(opt) {}

  Trajectory run(const LogState& start, double t_max, std::vector<EventSpec> events) const {
    if (!(t_max > start.t)) throw InputError("t_max must exceed the start time");
    for (double v : start.u)
      if (!std::isfinite(v)) throw InputError("initial state must be finite in log coordinates");

    Trajectory traj;
    const double span = t_max - start.t;
    const double h_min = 1e-14 * span;
    Sample cur{start.t, start.u, f_(start.t, start.u)};
    traj.samples.push_back(cur);

    std::vector<double> g_prev(events.size());
    std::vector<std::size_t> counts(events.size(), 0);
    for (std::size_t e = 0; e < events.size(); ++e) g_prev[e] = events[e].g(cur.t, cur.u, cur.du);

    double h = opt_.initial_step > 0.0 ? opt_.initial_step : initial_step(cur, span);
    h = std::min({h, opt_.max_step, span});

    for (std::size_t step = 0; step < opt_.max_steps; ++step) {
      if (cur.t >= t_max) break;
      h = std::min(h, t_max - cur.t);

      Sample next{};
      double err = 0.0;
      for (;;) {
        if (h < h_min) {
          traj.status = RunStatus::step_underflow;
          traj.message = "step size underflow at t=" + std::to_string(cur.t);
          finish(traj, cur);
          return traj;
        }
        err = attempt(cur, h, next);
        if (err <= 1.0 && std::isfinite(err)) break;
        const double fac = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
        h *= fac;
      }

      // Events inside (cur.t, next.t], earliest first.
      std::vector<std::pair<double, std::size_t>> hits;
      std::vector<double> g_next(events.size());
      for (std::size_t e = 0; e < events.size(); ++e) {
        g_next[e] = events[e].g(next.t, next.u, next.du);
        if (crosses(g_prev[e], g_next[e], events[e].direction))
          hits.emplace_back(locate_root(cur, next, f_, events[e].g), e);
      }
      std::sort(hits.begin(), hits.end());
      for (const auto& [te, e] : hits) {
        Event ev{events[e].kind, te, hermite(cur, next, te)};
        if (events[e].accept && !events[e].accept(ev)) continue;
        traj.events.push_back(ev);
        ++counts[e];
        if (events[e].terminal_count > 0 && counts[e] >= events[e].terminal_count) {
          Sample stop{te, ev.u, f_(te, ev.u)};
          traj.samples.push_back(stop);
          traj.status = RunStatus::event_limit;
          traj.stopped_by = events[e].kind;
          return traj;
        }
      }
      g_prev = g_next;

      cur = next;
      if (opt_.keep_samples) traj.samples.push_back(cur);

      const double fac = err > 0.0 ? std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2))) : 5.0;
      h = std::min(h * fac, opt_.max_step);
    }
    finish(traj, cur);
    if (cur.t < t_max) traj.message = "step limit reached at t=" + std::to_string(cur.t);
    return traj;
  }

 private:
  void finish(Trajectory& traj, const Sample& cur) const {
    if (traj.samples.back().t != cur.t) traj.samples.push_back(cur);
  }

  double scale(double a, double b) const {
    return opt_.atol + opt_.rtol * std::max(std::abs(a), std::abs(b));
  }

  double initial_step(const Sample& s, double span) const {
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t k = 0; k < kDim; ++k) {
      const double sc = scale(s.u[k], s.u[k]);
      d0 = std::max(d0, std::abs(s.u[k]) / sc);
      d1 = std::max(d1, std::abs(s.du[k]) / sc);
    }
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, span);
    Vec4 u1;
    for (std::size_t k = 0; k < kDim; ++k) u1[k] = s.u[k] + h0 * s.du[k];
    const Vec4 f1 = f_(s.t + h0, u1);
    double d2 = 0.0;
    for (std::size_t k = 0; k < kDim; ++k)
      d2 = std::max(d2, std::abs(f1[k] - s.du[k]) / scale(s.u[k], s.u[k]) / h0);
    const double dm = std::max(d1, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    return std::min(100 * h0, h1);
  }

  // One trial step; fills `out` and returns the scaled error norm (max norm).
  double attempt(const Sample& s, double h, Sample& out) const {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    const Vec4& y = s.u;
    const Vec4& k1 = s.du;
    Vec4 tmp;
    auto stage = [&](auto&& combine) {
      for (std::size_t k = 0; k < kDim; ++k) tmp[k] = y[k] + h * combine(k);
      return tmp;
    };
    const Vec4 k2 = f_(s.t + c2 * h, stage([&](std::size_t k) { return a21 * k1[k]; }));
    const Vec4 k3 = f_(s.t + c3 * h, stage([&](std::size_t k) { return a31 * k1[k] + a32 * k2[k]; }));
    const Vec4 k4 = f_(s.t + c4 * h, stage([&](std::size_t k) {
                         return a41 * k1[k] + a42 * k2[k] + a43 * k3[k];
                       }));
    const Vec4 k5 = f_(s.t + c5 * h, stage([&](std::size_t k) {
                         return a51 * k1[k] + a52 * k2[k] + a53 * k3[k] + a54 * k4[k];
                       }));
    const Vec4 k6 = f_(s.t + h, stage([&](std::size_t k) {
                         return a61 * k1[k] + a62 * k2[k] + a63 * k3[k] + a64 * k4[k] + a65 * k5[k];
                       }));
    Vec4 y5;
    for (std::size_t k = 0; k < kDim; ++k)
      y5[k] = y[k] + h * (b1 * k1[k] + b3 * k3[k] + b4 * k4[k] + b5 * k5[k] + b6 * k6[k]);
    const Vec4 k7 = f_(s.t + h, y5);

    double err = 0.0;
    for (std::size_t k = 0; k < kDim; ++k) {
      const double ek =
          h * (e1 * k1[k] + e3 * k3[k] + e4 * k4[k] + e5 * k5[k] + e6 * k6[k] + e7 * k7[k]);
      err = std::max(err, std::abs(ek) / scale(y[k], y5[k]));
    }
    out = Sample{s.t + h, y5, k7};
    return err;
  }

  Field f_;
  IntegratorOptions opt_;
};

inline Field log_field(const LVSystem& sys) {
  return [sys](double, const Vec4& u) { return log_rhs(sys, u); };
}

inline Trajectory integrate(const LVSystem& sys, const LogState& start, double t_max,
                            std::vector<EventSpec> events, const IntegratorOptions& opt = {}) {
  return DormandPrince45(log_field(sys), opt).run(start, t_max, std::move(events));
}

/// Event: local minimum of u_coord (u_coord' crossing zero upward), kept only
/// below `ceiling`.
inline EventSpec minimum_event(std::size_t coord, double ceiling, std::size_t terminal_count = 0,
                               std::string kind = "min_u4") {
  EventSpec e;
  e.kind = std::move(kind);
  e.g = [coord](double, const Vec4&, const Vec4& du) { return du[coord]; };
  e.direction = 1;
  e.accept = [coord, ceiling](const Event& ev) { return ev.u[coord] < ceiling; };
  e.terminal_count = terminal_count;
  return e;
}

/// Event: u_coord crossing `level` in the given direction (a Poincare section
/// x_coord = exp(level)).
inline EventSpec section_event(std::size_t coord, double level, int direction, std::string kind,
                               std::size_t terminal_count = 0) {
  EventSpec e;
  e.kind = std::move(kind);
  e.g = [coord, level](double, const Vec4& u, const Vec4&) { return u[coord] - level; };
  e.direction = direction;
  e.terminal_count = terminal_count;
  return e;
}

struct LocalPassage {
  double time;
  std::vector<double> log_z_out;
};

/// Linearised passage near an equilibrium: the expanding coordinate grows at
/// rate e_out from exp(log_z_exp_in) to h, every other coordinate decays at
/// its own rate k. Works entirely on logarithms.
inline LocalPassage linear_local_map_log(double e_out, const std::vector<double>& decay_rates,
                                         const std::vector<double>& log_z, double log_z_exp_in,
                                         double log_h) {
  if (!(e_out > 0.0)) throw InputError("expanding rate must be positive");
  if (decay_rates.size() != log_z.size())
    throw InputError("decay_rates and z_values must have the same length");
  if (!(log_z_exp_in <= log_h))
    throw InputError("expanding coordinate already at or beyond the outgoing section");
  LocalPassage out{-(log_z_exp_in - log_h) / e_out, {}};
  out.log_z_out.reserve(log_z.size());
  for (std::size_t k = 0; k < log_z.size(); ++k) {
    if (!(decay_rates[k] > 0.0)) throw InputError("decay rates must be positive");
    const double q = decay_rates[k] / e_out;
    out.log_z_out.push_back(log_z[k] + q * log_z_exp_in - q * log_h);
  }
  return out;
}

/// Same map on plain values: returns the passage time and z at the outgoing section.
inline std::pair<double, std::vector<double>> linear_local_map(double e_out,
                                                               const std::vector<double>& decay_rates,
                                                               const std::vector<double>& z_values,
                                                               double z_exp_in, double h) {
  if (!(h > 0.0) || !(z_exp_in > 0.0)) throw InputError("section offset and z_exp_in must be positive");
  if (z_exp_in > h) throw InputError("expanding coordinate already beyond the outgoing section");
  std::vector<double> log_z;
  for (double z : z_values) {
    if (!(z > 0.0)) throw InputError("z values must be positive");
    log_z.push_back(std::log(z));
  }
  const auto p = linear_local_map_log(e_out, decay_rates, log_z, std::log(z_exp_in), std::log(h));
  std::vector<double> z_out;
  for (double l : p.log_z_out) z_out.push_back(std::exp(l));
  return {p.time, z_out};
}

struct Minimum {
  double t;
  double u;
};

/// Local minima of u_coord along a stored trajectory: sign changes - to + of
/// the derivative between samples, refined by bisection on `field` evaluated
/// at the interpolated state. Minima at or above `ceiling` are dropped.
inline std::vector<Minimum> detect_minima(const Trajectory& traj, std::size_t coord, double ceiling,
                                          const Field& field) {
  if (traj.samples.empty()) throw InputError("empty trajectory");
  std::vector<Minimum> out;
  auto g = [coord](double, const Vec4&, const Vec4& du) { return du[coord]; };
  for (std::size_t k = 0; k + 1 < traj.samples.size(); ++k) {
    const Sample& a = traj.samples[k];
    const Sample& b = traj.samples[k + 1];
    if (!(b.t > a.t) || !crosses(a.du[coord], b.du[coord], 1)) continue;
    const double t = locate_root(a, b, field, g);
    const double u = hermite(a, b, t)[coord];
    if (u < ceiling) out.push_back({t, u});
  }
  return out;
}

inline std::vector<Minimum> detect_minima(const Trajectory& traj, std::size_t coord, double ceiling,
                                          const LVSystem& sys) {
  return detect_minima(traj, coord, ceiling, log_field(sys));
}

}  // namespace hetcycle
