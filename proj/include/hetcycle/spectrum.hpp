#pragma once

// Jacobians at the cycle equilibria and classification of their eigenvalues
// into radial, contracting, expanding and transverse.
//
// Coordinate hyperplanes are invariant, so at an equilibrium every row of the
// Jacobian belonging to a zero coordinate is diagonal: off-support eigenvalues
// are read straight off the diagonal. The remaining on-support (radial) block
// is at most 2x2.

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "hetcycle/errors.hpp"
#include "hetcycle/linalg.hpp"
#include "hetcycle/model.hpp"

namespace hetcycle {

/// J_kl = x_k M_kl + delta_kl (r_k + (M x)_k).
inline Mat4 jacobian(const LVSystem& sys, const Vec4& x) {
  const Vec4 g = sys.growth(x);
  Mat4 j{};
  for (std::size_t k = 0; k < kDim; ++k) {
    for (std::size_t l = 0; l < kDim; ++l) j[k][l] = x[k] * sys.M[k][l];
    j[k][k] += g[k];
  }
  return j;
}

struct RadialBlock {
  std::size_t equilibrium;
  IndexSet support;
  SmallMatrix matrix;
  std::vector<std::complex<double>> eigenvalues;
  bool stable;
};

namespace detail {

inline bool block_stable(const SmallMatrix& m) {
  if (m.rows() == 1) return m(0, 0) < 0.0;
  return m.trace() < 0.0 && m.determinant() > 0.0;
}

inline RadialBlock make_radial_block(const CaseSpec& spec, const LVSystem& sys,
                                     const Equilibrium& eq) {
  const auto idx = spec.l_supports[eq.index].indices();
  SmallMatrix b(idx.size(), idx.size());
  for (std::size_t r = 0; r < idx.size(); ++r)
    for (std::size_t c = 0; c < idx.size(); ++c) b(r, c) = eq.x[idx[r]] * sys.M[idx[r]][idx[c]];
  return RadialBlock{eq.index, spec.l_supports[eq.index], b, b.eigenvalues(), block_stable(b)};
}

}  // namespace detail

/// On-support block diag(x_sup) M_sup of the Jacobian at equilibrium i.
inline RadialBlock radial_block(const ParameterSet& params, std::size_t i) {
  if (i >= 4) throw InputError("equilibrium index out of range: " + std::to_string(i));
  return detail::make_radial_block(case_spec(params.case_id()), assemble_system(params),
                                   equilibria(params)[i]);
}

/// Radial blocks of all four equilibria; stability is trace < 0 and det > 0
/// for 2x2 blocks, a negative entry for 1x1 blocks.
inline std::array<RadialBlock, 4> radial_stability(const ParameterSet& params) {
  const CaseSpec spec = case_spec(params.case_id());
  const LVSystem sys = assemble_system(params);
  const auto eqs = equilibria(params);
  return {detail::make_radial_block(spec, sys, eqs[0]), detail::make_radial_block(spec, sys, eqs[1]),
          detail::make_radial_block(spec, sys, eqs[2]), detail::make_radial_block(spec, sys, eqs[3])};
}

struct EigenEntry {
  std::complex<double> value;
  std::optional<std::size_t> direction;  // coordinate; empty for a 2x2 radial block
  Role role;
};

struct EquilibriumEigen {
  std::size_t index;
  Vec4 x;
  std::vector<EigenEntry> entries;

  std::size_t count(Role r) const {
    std::size_t n = 0;
    for (const auto& e : entries) n += e.role == r ? 1 : 0;
    return n;
  }
};

struct EigenReport {
  CaseId case_id;
  std::array<EquilibriumEigen, 4> equilibria;
};

/// Classify eigenvalues of an arbitrary LV system against the lattice of
/// `spec`. Roles come from the lattice; values from the Jacobian.
inline EigenReport classify(const CaseSpec& spec, const LVSystem& sys,
                            const std::array<Equilibrium, 4>& eqs) {
  EigenReport report{spec.id, {}};
  for (std::size_t i = 0; i < 4; ++i) {
    const Mat4 j = jacobian(sys, eqs[i].x);
    auto& out = report.equilibria[i];
    out.index = i;
    out.x = eqs[i].x;

    const RadialBlock block = detail::make_radial_block(spec, sys, eqs[i]);
    for (const auto& ev : block.eigenvalues) {
      std::optional<std::size_t> dir;
      if (block.support.size() == 1) dir = block.support.indices().front();
      out.entries.push_back({ev, dir, Role::radial});
    }

    std::size_t positive = 0;
    std::optional<double> expanding;
    for (std::size_t k = 0; k < kDim; ++k) {
      if (spec.l_supports[i].contains(k)) continue;
      const Role role = spec.role(i, k);
      const double v = j[k][k];
      if (v > 0.0) ++positive;
      if (role == Role::expanding) expanding = v;
      out.entries.push_back({std::complex<double>(v, 0.0), k, role});
    }
    if (!expanding || *expanding <= 0.0 || positive != 1) {
      throw StructuralError("cycle assumption violated at equilibrium " + std::to_string(i + 1) +
                            ": need exactly one positive (expanding) eigenvalue off the support");
    }
  }
  return report;
}

inline EigenReport classify(const ParameterSet& params) {
  return classify(case_spec(params.case_id()), assemble_system(params), equilibria(params));
}

/// True iff some equilibrium has no contracting eigenvalue and some
/// equilibrium has at least two.
inline bool check_theorem1(const EigenReport& report) {
  bool none = false, several = false;
  for (const auto& eq : report.equilibria) {
    const auto n = eq.count(Role::contracting);
    none = none || n == 0;
    several = several || n >= 2;
  }
  return none && several;
}

}  // namespace hetcycle
