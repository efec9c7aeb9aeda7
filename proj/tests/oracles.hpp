#pragma once

// Reference computations used by the tests. They are written out by hand from
// the model equations and share no code with the library beyond its types.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hetcycle/hetcycle.hpp"

namespace oracle {

using hetcycle::CaseId;
using hetcycle::ParameterSet;
using hetcycle::Vec4;

// Closed-form stability indices, multiplied out from the transition matrices.
inline double delta_closed_form(const ParameterSet& p) {
  auto q = [&](const char* num, const char* den) { return p[num] / p[den]; };
  switch (p.case_id()) {
    case CaseId::one:
      return (q("t24", "e23") * q("c13", "e12") + q("c14", "e12")) *
             (q("t42", "e41") * q("c31", "e34") + q("c32", "e34"));
    case CaseId::two: {
      const double v1 = q("t42", "e41") * q("c31", "e34") + q("c32", "e34");
      const double v2 = q("c43", "e41") * q("c31", "e34");
      const double w1 = q("t13", "e12") * v1 + v2;
      const double w2 = q("c14", "e12") * v1;
      return q("t24", "e23") * w1 + w2;
    }
    case CaseId::three: {
      const double a31 = q("c31", "e34");
      const double v1 = q("c42", "e41") * a31, v2 = q("c43", "e41") * a31;
      const double w1 = q("t13", "e12") * v1 + v2, w2 = q("c14", "e12") * v1;
      return q("t24", "e23") * w1 + w2;
    }
    case CaseId::four:
      return (q("t24", "e23") * q("c13", "e12") + q("c14", "e12")) * q("c31", "e34") * q("c42", "e41");
  }
  return NAN;
}

// Signed off-support eigenvalue expected at each equilibrium, by coordinate
// (0-based), as named in the model equations.
using SignedTable = std::array<std::map<std::size_t, std::pair<double, std::string>>, 4>;

inline SignedTable off_support_eigenvalues(CaseId id) {
  const double P = +1.0, N = -1.0;
  switch (id) {
    case CaseId::one:
      return {{{{1, {P, "e12"}}, {2, {N, "c13"}}, {3, {N, "c14"}}},
               {{2, {P, "e23"}}, {3, {N, "t24"}}},
               {{0, {N, "c31"}}, {1, {N, "c32"}}, {3, {P, "e34"}}},
               {{0, {P, "e41"}}, {1, {N, "t42"}}}}};
    case CaseId::two:
      return {{{{1, {P, "e12"}}, {2, {N, "t13"}}, {3, {N, "c14"}}},
               {{2, {P, "e23"}}, {3, {N, "t24"}}},
               {{0, {N, "c31"}}, {1, {N, "c32"}}, {3, {P, "e34"}}},
               {{0, {P, "e41"}}, {1, {N, "t42"}}, {2, {N, "c43"}}}}};
    case CaseId::three:
      return {{{{1, {P, "e12"}}, {2, {N, "t13"}}, {3, {N, "c14"}}},
               {{2, {P, "e23"}}, {3, {N, "t24"}}},
               {{0, {N, "c31"}}, {3, {P, "e34"}}},
               {{0, {P, "e41"}}, {1, {N, "c42"}}, {2, {N, "c43"}}}}};
    case CaseId::four:
      return {{{{1, {P, "e12"}}, {2, {N, "c13"}}, {3, {N, "c14"}}},
               {{2, {P, "e23"}}, {3, {N, "t24"}}},
               {{0, {N, "c31"}}, {3, {P, "e34"}}},
               {{0, {P, "e41"}}, {1, {N, "c42"}}}}};
  }
  return {};
}

// Radial matrices as printed with the example systems; empty for a 1x1 block
// (whose value is -1).
inline std::optional<std::array<std::array<double, 2>, 2>> radial_matrix(const ParameterSet& p,
                                                                         std::size_t i) {
  using M2 = std::array<std::array<double, 2>, 2>;
  const CaseId id = p.case_id();
  auto xi2 = [&] {
    const double d1 = p["d1"], e12 = p["e12"];
    return M2{{{-d1, d1 * (d1 - 1)}, {1 + e12, 1 - d1 * (1 + e12)}}};
  };
  auto xi3_plane = [&](double c13_or_t13) {
    const double d1 = p["d1"], d2 = p["d2"], e12 = p["e12"], e23 = p["e23"], k = c13_or_t13;
    return M2{{{d2 * (1 - d1 * (1 + e12)), d2 * (1 - d2 + d1 * d2 * (1 + e12))},
               {d1 * (1 + k) - 1 + e23, d2 * (1 - e23) - d1 * d2 * (1 + k) - 1}}};
  };
  if (i == 1) return xi2();
  if (id == CaseId::one && i == 3) {
    const double d3 = p["d3"], e34 = p["e34"];
    return M2{{{-d3, d3 * (d3 - 1)}, {1 + e34, 1 - d3 * (1 + e34)}}};
  }
  if (id == CaseId::three && i == 2) return xi3_plane(p["t13"]);
  if (id == CaseId::four && i == 2) return xi3_plane(p["c13"]);
  if (id == CaseId::four && i == 3) {
    const double d1 = p["d1"], d2 = p["d2"], d3 = p["d3"], c13 = p["c13"], c14 = p["c14"],
                 e23 = p["e23"], t24 = p["t24"], e34 = p["e34"];
    return M2{{{-d3 * (d1 * d2 * (1 + c13) + d2 * (e23 - 1) + 1),
                d3 * (d1 * d2 * d3 * (1 + c13) + d2 * d3 * (e23 - 1) + d3 - 1)},
               {d2 * (1 + t24) - d1 * d2 * (1 + c14) + e34 - 1,
                d1 * d2 * d3 * (1 + c14) - d2 * d3 * (1 + t24) + d3 * (1 - e34) - 1}}};
  }
  return std::nullopt;
}

// Right-hand sides as printed: x_k [s_k (1 - X) + sum_l A_kl x_l] with
// X = x1+x2+x3+x4 and s_k = +1 or -1. Returns (s, A).
struct PrintedSystem {
  std::array<double, 4> sign;
  hetcycle::Mat4 A;
};

inline PrintedSystem printed_system(const ParameterSet& p) {
  auto v = [&](const char* k) { return p.has(k) ? p[k] : NAN; };
  const double d1 = v("d1"), d2 = v("d2"), d3 = v("d3");
  const double e12 = v("e12"), e23 = v("e23"), e34 = v("e34"), e41 = v("e41");
  const double c13 = v("c13"), c14 = v("c14"), c31 = v("c31"), c32 = v("c32"), c42 = v("c42"), c43 = v("c43");
  const double t13 = v("t13"), t24 = v("t24"), t42 = v("t42");
  switch (p.case_id()) {
    case CaseId::one:
      return {{1, -1, 1, -1},
              {{{0, d1, -c31, d3 * (1 + c31) + e41},
                {e12, -d1 * (1 + e12), -c32, d3 * (-1 + c32) - t42},
                {-c13, d1 * (1 + c13) + e23, 0, d3},
                {-c14, d1 * (-1 + c14) - t24, e34, -d3 * (1 + e34)}}}};
    case CaseId::two:
      return {{1, -1, 1, 1},
              {{{0, d1, -c31, e41},
                {e12, -d1 * (1 + e12), -c32, -t42},
                {-t13, d1 * (1 + t13) + e23, 0, -c43},
                {-c14, d1 * (1 + c14) - t24, e34, 0}}}};
    case CaseId::three:
      return {{1, -1, 1, 1},
              {{{0, d1, d2 * (1 - d1) - c31, e41},
                {e12, -d1 * (1 + e12), d2 * (d1 * (1 + e12) - 1), -c42},
                {-t13, d1 * (1 + t13) + e23, d2 * (1 - d1 * (1 + t13) - e23), -c43},
                {-c14, d1 * (1 + c14) - t24, d2 * (1 + t24) - d1 * d2 * (1 + c14) + e34, 0}}}};
    case CaseId::four:
      return {{1, -1, 1, 1},
              {{{0, d1, d2 * (1 - d1) - c31, d3 * (1 + c31) + d2 * d3 * (d1 - 1) + e41},
                {e12, -d1 * (1 + e12), d2 * (d1 * (1 + e12) - 1),
                 -(d1 * d2 * d3 * (1 + e12) + d3 * (1 - d2) + c42)},
                {-c13, d1 * (1 + c13) + e23, d2 * (1 - d1 * (1 + c13) - e23),
                 d3 * (d1 * d2 * (1 + c13) + d2 * (e23 - 1) + 1)},
                {-c14, d1 * (1 + c14) - t24, d2 * (1 + t24) - d1 * d2 * (1 + c14) + e34,
                 d3 * (d1 * d2 * (1 + c14) - d2 * (1 + t24) - e34 + 1)}}}};
  }
  return {};
}

inline Vec4 printed_rhs(const PrintedSystem& s, const Vec4& x) {
  const double X = x[0] + x[1] + x[2] + x[3];
  Vec4 out{};
  for (std::size_t k = 0; k < 4; ++k) {
    double g = s.sign[k] * (1 - X);
    for (std::size_t l = 0; l < 4; ++l) g += s.A[k][l] * x[l];
    out[k] = x[k] * g;
  }
  return out;
}

// Central-difference Jacobian of x -> rhs(x).
inline hetcycle::Mat4 fd_jacobian(const std::function<Vec4(const Vec4&)>& f, const Vec4& x,
                                  double h = 1e-6) {
  hetcycle::Mat4 j{};
  for (std::size_t l = 0; l < 4; ++l) {
    Vec4 xp = x, xm = x;
    xp[l] += h;
    xm[l] -= h;
    const Vec4 fp = f(xp), fm = f(xm);
    for (std::size_t k = 0; k < 4; ++k) j[k][l] = (fp[k] - fm[k]) / (2 * h);
  }
  return j;
}

// Fixed-step classical Runge-Kutta on z' = rates * z (raw coordinates),
// stopped when component `watch` reaches `level` (located by linear
// interpolation of log z within the last step).
struct LinearFlowResult {
  double t;
  std::vector<double> z;
};

inline LinearFlowResult rk4_linear_until(const std::vector<double>& rates, std::vector<double> z,
                                         std::size_t watch, double level, double dt) {
  const std::size_t n = z.size();
  auto f = [&](const std::vector<double>& y) {
    std::vector<double> d(n);
    for (std::size_t k = 0; k < n; ++k) d[k] = rates[k] * y[k];
    return d;
  };
  auto axpy = [&](const std::vector<double>& y, const std::vector<double>& d, double s) {
    std::vector<double> r(n);
    for (std::size_t k = 0; k < n; ++k) r[k] = y[k] + s * d[k];
    return r;
  };
  double t = 0.0;
  while (true) {
    const auto k1 = f(z), k2 = f(axpy(z, k1, dt / 2)), k3 = f(axpy(z, k2, dt / 2)), k4 = f(axpy(z, k3, dt));
    std::vector<double> next(n);
    for (std::size_t k = 0; k < n; ++k) next[k] = z[k] + dt / 6 * (k1[k] + 2 * k2[k] + 2 * k3[k] + k4[k]);
    if (next[watch] >= level) {
      // Within one step log z is linear in t to RK4 accuracy.
      const double s = (std::log(level) - std::log(z[watch])) / (std::log(next[watch]) - std::log(z[watch]));
      LinearFlowResult r{t + s * dt, {}};
      for (std::size_t k = 0; k < n; ++k) r.z.push_back(std::exp(std::log(z[k]) + s * (std::log(next[k]) - std::log(z[k]))));
      return r;
    }
    z = std::move(next);
    t += dt;
  }
}

inline ParameterSet random_parameters(CaseId id, std::mt19937_64& rng, double lo = 0.1, double hi = 2.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::map<std::string, double> v;
  for (const auto& k : hetcycle::required_keys(id)) v[k] = u(rng);
  return ParameterSet(id, v);
}

// 64-bit FNV-1a, used to pin data tables.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline double rel_diff(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

}  // namespace oracle
