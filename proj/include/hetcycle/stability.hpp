#pragma once

// Transition matrices of the return map and the stability index delta.
//
// Each segment matrix maps logarithms of the small coordinates on the incoming
// section at xi_i to those on the incoming section at xi_{i+1}. Its shape
// depends on whether xi_{i-1} and xi_i lie on an axis or in a plane:
//
//   axis -> axis    [[b_i^(i-2), 1], [a_i^(i-1), 0]]   (2x2)
//   plane -> plane  [a_i^(i-2)]                        (1x1)
//   plane -> axis   [a_i^(i-2); a_i^(i-1)]             (2x1)
//   axis -> plane   [b_i^(i-2), 1]                     (1x2)
//
// a_i^(j) = c_ij / e_i,out and b_i^(j) = t_ij / e_i,out.

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "hetcycle/errors.hpp"
#include "hetcycle/linalg.hpp"
#include "hetcycle/model.hpp"
#include "hetcycle/spectrum.hpp"

namespace hetcycle {

struct RatioTable {
  CaseId case_id;
  std::array<std::array<std::optional<double>, 4>, 4> a{};  // contracting / expanding
  std::array<std::array<std::optional<double>, 4>, 4> b{};  // transverse / expanding
  std::array<double, 4> e_out{};

  double contracting(std::size_t i, std::size_t j) const { return lookup(a, 'a', i, j); }
  double transverse(std::size_t i, std::size_t j) const { return lookup(b, 'b', i, j); }

 private:
  static double lookup(const std::array<std::array<std::optional<double>, 4>, 4>& t, char name,
                       std::size_t i, std::size_t j) {
    if (!t[i][j]) {
      throw StructuralError(std::string("ratio ") + name + "_" + std::to_string(i + 1) + "^(" +
                            std::to_string(j + 1) + ") does not exist in this cycle");
    }
    return *t[i][j];
  }
};

inline RatioTable ratios(const ParameterSet& params) {
  const CaseSpec spec = case_spec(params.case_id());
  RatioTable t{params.case_id()};
  for (std::size_t i = 0; i < 4; ++i) {
    const std::size_t out = cyc(i, 1);
    t.e_out[i] = params[eigen_key(Role::expanding, i, out)];
    for (std::size_t j = 0; j < kDim; ++j) {
      const Role role = spec.role(i, j);
      if (role == Role::contracting) t.a[i][j] = params[eigen_key(role, i, j)] / t.e_out[i];
      if (role == Role::transverse) t.b[i][j] = params[eigen_key(role, i, j)] / t.e_out[i];
    }
  }
  return t;
}

enum class SegmentKind { axis_axis, plane_plane, plane_axis, axis_plane };

inline const char* to_string(SegmentKind k) {
  switch (k) {
    case SegmentKind::axis_axis: return "axis-axis";
    case SegmentKind::plane_plane: return "plane-plane";
    case SegmentKind::plane_axis: return "plane-axis";
    case SegmentKind::axis_plane: return "axis-plane";
  }
  return "?";
}

struct SegmentMatrix {
  std::size_t equilibrium;
  SegmentKind kind;
  SmallMatrix matrix;
};

inline SegmentMatrix segment_matrix(Location prev, Location cur, const RatioTable& r,
                                    std::size_t i) {
  const CaseSpec spec = case_spec(r.case_id);
  if (spec.location(cyc(i, -1)) != prev || spec.location(i) != cur) {
    throw StructuralError(std::string("location pair ") + to_string(prev) + "->" + to_string(cur) +
                          " does not match case " + std::to_string(to_int(r.case_id)) +
                          " at equilibrium " + std::to_string(i + 1));
  }
  const std::size_t back2 = cyc(i, -2);
  const std::size_t back1 = cyc(i, -1);
  if (prev == Location::axis && cur == Location::axis) {
    SmallMatrix m(2, 2);
    m(0, 0) = r.transverse(i, back2);
    m(0, 1) = 1.0;
    m(1, 0) = r.contracting(i, back1);
    m(1, 1) = 0.0;
    return {i, SegmentKind::axis_axis, m};
  }
  if (prev == Location::plane && cur == Location::plane) {
    SmallMatrix m(1, 1);
    m(0, 0) = r.contracting(i, back2);
    return {i, SegmentKind::plane_plane, m};
  }
  if (prev == Location::plane && cur == Location::axis) {
    SmallMatrix m(2, 1);
    m(0, 0) = r.contracting(i, back2);
    m(1, 0) = r.contracting(i, back1);
    return {i, SegmentKind::plane_axis, m};
  }
  SmallMatrix m(1, 2);
  m(0, 0) = r.transverse(i, back2);
  m(0, 1) = 1.0;
  return {i, SegmentKind::axis_plane, m};
}

/// The segment at equilibrium i with locations taken from the case lattice.
inline SegmentMatrix segment_matrix(const RatioTable& r, std::size_t i) {
  const CaseSpec spec = case_spec(r.case_id);
  return segment_matrix(spec.location(cyc(i, -1)), spec.location(i), r, i);
}

/// Segments in the order they act, starting on the incoming section at
/// equilibrium `start` (0-based; start 2 is H_3^{in,2}).
inline std::vector<SegmentMatrix> segment_chain(const RatioTable& r, std::size_t start) {
  std::vector<SegmentMatrix> chain;
  for (int k = 0; k < 4; ++k) chain.push_back(segment_matrix(r, cyc(start, k)));
  return chain;
}

/// Product of a chain given in acting order (first element acts first).
inline SmallMatrix compose(const std::vector<SegmentMatrix>& chain) {
  SmallMatrix p = chain.front().matrix;
  for (std::size_t k = 1; k < chain.size(); ++k) p = chain[k].matrix * p;
  return p;
}

enum class Prediction { stable, unstable, marginal };

inline const char* to_string(Prediction p) {
  switch (p) {
    case Prediction::stable: return "stable";
    case Prediction::unstable: return "unstable";
    case Prediction::marginal: return "marginal";
  }
  return "?";
}

inline constexpr double kMarginalBand = 1e-9;
inline constexpr std::size_t kReturnSection = 2;  // H_3^{in,2}

inline Prediction predict(double delta) {
  if (delta > 1.0 + kMarginalBand) return Prediction::stable;
  if (delta < 1.0 - kMarginalBand) return Prediction::unstable;
  return Prediction::marginal;
}

struct StabilityReport {
  CaseId case_id;
  ParameterSet params;
  RatioTable ratios;
  std::vector<SegmentMatrix> segments;  // acting order from H_3^{in,2}
  double delta;
  Prediction predicted;
  std::array<RadialBlock, 4> radial;
};

inline StabilityReport delta(const ParameterSet& params) {
  const RatioTable r = ratios(params);
  auto chain = segment_chain(r, kReturnSection);
  const SmallMatrix p = compose(chain);
  if (p.rows() != 1 || p.cols() != 1)
    throw StructuralError("return map from H_3^{in,2} is " + p.shape() + ", expected 1x1");
  return StabilityReport{params.case_id(), params, r, std::move(chain), p(0, 0), predict(p(0, 0)),
                         radial_stability(params)};
}

inline double delta_value(const ParameterSet& params) { return delta(params).delta; }

/// Eigenvalues of the return map started on the incoming section at `start`:
/// {delta} for a 1x1 product, {delta, 0} for a 2x2 one.
inline std::vector<std::complex<double>> cyclic_spectrum(const ParameterSet& params,
                                                         std::size_t start) {
  if (start >= 4) throw InputError("start section index out of range: " + std::to_string(start));
  const SmallMatrix p = compose(segment_chain(ratios(params), start));
  return p.eigenvalues();
}

struct SweepPoint {
  double value;
  double delta;
};

struct SweepResult {
  std::vector<std::string> keys;
  std::vector<SweepPoint> curve;
  std::vector<double> roots;  // parameter values with delta = 1
};

inline constexpr double kRootTolerance = 1e-10;

/// delta on a uniform grid with every key in `keys` set to the grid value;
/// sign changes of delta - 1 refined by bisection.
inline SweepResult boundary_sweep(const ParameterSet& params, const std::vector<std::string>& keys,
                                  double lo, double hi, std::size_t n) {
  if (keys.empty()) throw InputError("sweep needs at least one parameter key");
  for (const auto& k : keys)
    if (!params.has(k))
      throw InputError("parameter '" + k + "' is not defined for case " +
                       std::to_string(to_int(params.case_id())));
  if (!(lo < hi)) throw InputError("sweep range requires lo < hi");
  if (n < 2) throw InputError("sweep grid needs at least 2 points");
  if (!(lo > 0.0)) throw InputError("sweep range must stay positive");

  auto eval = [&](double v) {
    std::map<std::string, double> upd;
    for (const auto& k : keys) upd[k] = v;
    return delta_value(params.with(upd)) - 1.0;
  };

  SweepResult res{keys, {}, {}};
  res.curve.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double v = k + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
    res.curve.push_back({v, eval(v) + 1.0});
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    double a = res.curve[k].value, b = res.curve[k + 1].value;
    double fa = res.curve[k].delta - 1.0, fb = res.curve[k + 1].delta - 1.0;
    if (fa == 0.0) {
      res.roots.push_back(a);
      continue;
    }
    if (k + 2 == n && fb == 0.0) res.roots.push_back(b);
    if (fa * fb >= 0.0) continue;
    while (b - a > kRootTolerance) {
      const double m = 0.5 * (a + b);
      const double fm = eval(m);
      if (fm == 0.0) {
        a = b = m;
        break;
      }
      if ((fm < 0.0) == (fa < 0.0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
      }
    }
    res.roots.push_back(0.5 * (a + b));
  }
  return res;
}

}  // namespace hetcycle
