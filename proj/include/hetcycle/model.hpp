#pragma once

// The four R^4 heteroclinic cycles whose connecting subspaces change
// dimension around the cycle, and their Lotka-Volterra vector fields.
//
// Indexing convention: coordinates and equilibria are 0-based in code
// (x[0] is x1, equilibrium 0 is xi_1). Parameter keys keep the 1-based
// names used in the literature ("e12", "c31", "d1").

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <vector>

#include "hetcycle/errors.hpp"
#include "hetcycle/linalg.hpp"

namespace hetcycle {

enum class CaseId : int { one = 1, two = 2, three = 3, four = 4 };

inline CaseId case_from_int(int id) {
  if (id < 1 || id > 4) throw InputError("unknown case " + std::to_string(id) + " (expected 1..4)");
  return static_cast<CaseId>(id);
}

inline int to_int(CaseId id) { return static_cast<int>(id); }

inline constexpr std::array<CaseId, 4> kAllCases{CaseId::one, CaseId::two, CaseId::three,
                                                 CaseId::four};

/// Cyclic successor/predecessor of an equilibrium or coordinate index.
constexpr std::size_t cyc(std::size_t i, int shift) {
  return static_cast<std::size_t>((static_cast<int>(i) + shift + 8) % 4);
}

/// Set of coordinate indices 0..3.
class IndexSet {
 public:
  constexpr IndexSet() = default;
  constexpr IndexSet(std::initializer_list<std::size_t> idx) {
    for (auto i : idx) bits_ |= static_cast<std::uint8_t>(1u << i);
  }

  constexpr bool contains(std::size_t i) const { return (bits_ >> i) & 1u; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool empty() const { return bits_ == 0; }

  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < kDim; ++i)
      if (contains(i)) out.push_back(i);
    return out;
  }

  friend constexpr IndexSet operator&(IndexSet a, IndexSet b) { return from_bits(a.bits_ & b.bits_); }
  friend constexpr IndexSet operator|(IndexSet a, IndexSet b) { return from_bits(a.bits_ | b.bits_); }
  friend constexpr IndexSet operator-(IndexSet a, IndexSet b) {
    return from_bits(a.bits_ & static_cast<std::uint8_t>(~b.bits_));
  }
  friend constexpr bool operator==(IndexSet, IndexSet) = default;

 private:
  static constexpr IndexSet from_bits(unsigned b) {
    IndexSet s;
    s.bits_ = static_cast<std::uint8_t>(b & 0xFu);
    return s;
  }
  std::uint8_t bits_ = 0;
};

enum class Location { axis, plane };

inline const char* to_string(Location loc) { return loc == Location::axis ? "axis" : "plane"; }

enum class Role { radial, contracting, expanding, transverse };

inline const char* to_string(Role r) {
  switch (r) {
    case Role::radial: return "radial";
    case Role::contracting: return "contracting";
    case Role::expanding: return "expanding";
    case Role::transverse: return "transverse";
  }
  return "?";
}

/// Subspace lattice of one cycle: P_i contains the connection xi_i -> xi_{i+1},
/// L_i = P_{i-1} & P_i contains xi_i.
struct CaseSpec {
  CaseId id;
  std::array<IndexSet, 4> equilibrium_supports;
  std::array<IndexSet, 4> p_supports;
  std::array<IndexSet, 4> l_supports;

  Location location(std::size_t i) const {
    return equilibrium_supports[i].size() == 1 ? Location::axis : Location::plane;
  }

  /// Role of coordinate direction j at equilibrium i, read off the lattice.
  Role role(std::size_t i, std::size_t j) const {
    if (l_supports[i].contains(j)) return Role::radial;
    if ((p_supports[cyc(i, -1)] - l_supports[i]).contains(j)) return Role::contracting;
    if ((p_supports[i] - l_supports[i]).contains(j)) return Role::expanding;
    return Role::transverse;
  }

  std::array<std::size_t, 4> p_dims() const {
    return {p_supports[0].size(), p_supports[1].size(), p_supports[2].size(),
            p_supports[3].size()};
  }
};

inline CaseSpec case_spec(CaseId id) {
  CaseSpec s{id, {}, {}, {}};
  // xi_1 on the x1 axis and xi_2 in the (x1,x2) plane are common to all cases.
  switch (id) {
    case CaseId::one: s.equilibrium_supports = {IndexSet{0}, {0, 1}, {2}, {2, 3}}; break;
    case CaseId::two: s.equilibrium_supports = {IndexSet{0}, {0, 1}, {2}, {3}}; break;
    case CaseId::three: s.equilibrium_supports = {IndexSet{0}, {0, 1}, {1, 2}, {3}}; break;
    case CaseId::four: s.equilibrium_supports = {IndexSet{0}, {0, 1}, {1, 2}, {2, 3}}; break;
  }
  // Each connection leaves xi_i along the single expanding coordinate i+1.
  for (std::size_t i = 0; i < 4; ++i)
    s.p_supports[i] = s.equilibrium_supports[i] | IndexSet{cyc(i, 1)};
  for (std::size_t i = 0; i < 4; ++i) s.l_supports[i] = s.p_supports[cyc(i, -1)] & s.p_supports[i];
  return s;
}

inline CaseSpec case_spec(int id) { return case_spec(case_from_int(id)); }

/// "c13", "e12", "t24": eigenvalue key for direction j at equilibrium i.
inline std::string eigen_key(Role role, std::size_t i, std::size_t j) {
  char letter = 'c';
  if (role == Role::expanding) letter = 'e';
  if (role == Role::transverse) letter = 't';
  if (role == Role::radial) throw StructuralError("radial eigenvalues carry no parameter key");
  return std::string(1, letter) + std::to_string(i + 1) + std::to_string(j + 1);
}

/// Keys a parameter set of the given case must supply, sorted.
inline std::vector<std::string> required_keys(CaseId id) {
  const CaseSpec spec = case_spec(id);
  std::vector<std::string> keys;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < kDim; ++j) {
      const Role r = spec.role(i, j);
      if (r != Role::radial) keys.push_back(eigen_key(r, i, j));
    }
    // d_k is the free coordinate x_k of a planar equilibrium xi_{k+1}.
    if (i > 0 && spec.location(i) == Location::plane) keys.push_back("d" + std::to_string(i));
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

class ParameterSet {
 public:
  ParameterSet(CaseId id, std::map<std::string, double> values)
      : id_(id), values_(std::move(values)) {
    validate();
  }

  CaseId case_id() const { return id_; }
  const std::map<std::string, double>& values() const { return values_; }

  double at(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end())
      throw InputError("parameter '" + key + "' is not defined for case " + std::to_string(to_int(id_)));
    return it->second;
  }
  double operator[](const std::string& key) const { return at(key); }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  /// Copy with some keys replaced (all replaced values validated again).
  ParameterSet with(const std::map<std::string, double>& updates) const {
    auto v = values_;
    for (const auto& [k, x] : updates) {
      if (!v.count(k))
        throw InputError("parameter '" + k + "' is not defined for case " + std::to_string(to_int(id_)));
      v[k] = x;
    }
    return ParameterSet(id_, std::move(v));
  }

  friend bool operator==(const ParameterSet&, const ParameterSet&) = default;

 private:
  void validate() const {
    const auto keys = required_keys(id_);
    std::vector<std::string> missing;
    for (const auto& k : keys)
      if (!values_.count(k)) missing.push_back(k);
    if (!missing.empty()) {
      std::string msg = "missing parameter(s) for case " + std::to_string(to_int(id_)) + ":";
      for (const auto& k : missing) msg += " " + k;
      throw InputError(msg);
    }
    for (const auto& [k, v] : values_) {
      if (!std::binary_search(keys.begin(), keys.end(), k))
        throw InputError("unknown parameter '" + k + "' for case " + std::to_string(to_int(id_)));
      if (!(v > 0.0) || !std::isfinite(v))
        throw InputError("parameter '" + k + "' must be a finite positive number, got " +
                         std::to_string(v));
    }
  }

  CaseId id_;
  std::map<std::string, double> values_;
};

/// x' = x * (r + M x), componentwise.
struct LVSystem {
  Vec4 r{};
  Mat4 M{};
  ParameterSet params;

  Vec4 growth(const Vec4& x) const {
    Vec4 g = mat_vec(M, x);
    for (std::size_t k = 0; k < kDim; ++k) g[k] += r[k];
    return g;
  }

  Vec4 rhs(const Vec4& x) const {
    Vec4 g = growth(x);
    for (std::size_t k = 0; k < kDim; ++k) g[k] *= x[k];
    return g;
  }
};

namespace detail {

// Rows written as x_k[s_k (1 - X) + ...] with X = x1+x2+x3+x4; fold the X term
// into M and the constant into r.
inline void fold_total(LVSystem& sys, std::size_t row, double sign) {
  sys.r[row] = sign;
  for (auto& m : sys.M[row]) m -= sign;
}

}  // namespace detail

inline LVSystem assemble_system(const ParameterSet& p) {
  LVSystem sys{{}, {}, p};
  auto& M = sys.M;
  const double d1 = p.has("d1") ? p["d1"] : 0.0;
  const double d2 = p.has("d2") ? p["d2"] : 0.0;
  const double d3 = p.has("d3") ? p["d3"] : 0.0;

  switch (p.case_id()) {
    case CaseId::one: {
      M[0] = {0.0, d1, -p["c31"], d3 * (1 + p["c31"]) + p["e41"]};
      M[1] = {p["e12"], -d1 * (1 + p["e12"]), -p["c32"], d3 * (-1 + p["c32"]) - p["t42"]};
      M[2] = {-p["c13"], d1 * (1 + p["c13"]) + p["e23"], 0.0, d3};
      M[3] = {-p["c14"], d1 * (-1 + p["c14"]) - p["t24"], p["e34"], -d3 * (1 + p["e34"])};
      detail::fold_total(sys, 0, 1.0);
      detail::fold_total(sys, 1, -1.0);
      detail::fold_total(sys, 2, 1.0);
      detail::fold_total(sys, 3, -1.0);
      break;
    }
    case CaseId::two: {
      M[0] = {0.0, d1, -p["c31"], p["e41"]};
      M[1] = {p["e12"], -d1 * (1 + p["e12"]), -p["c32"], -p["t42"]};
      M[2] = {-p["t13"], d1 * (1 + p["t13"]) + p["e23"], 0.0, -p["c43"]};
      M[3] = {-p["c14"], d1 * (1 + p["c14"]) - p["t24"], p["e34"], 0.0};
      detail::fold_total(sys, 0, 1.0);
      detail::fold_total(sys, 1, -1.0);
      detail::fold_total(sys, 2, 1.0);
      detail::fold_total(sys, 3, 1.0);
      break;
    }
    case CaseId::three: {
      const double e12 = p["e12"], t13 = p["t13"], c14 = p["c14"], t24 = p["t24"];
      M[0] = {0.0, d1, d2 * (1 - d1) - p["c31"], p["e41"]};
      M[1] = {e12, -d1 * (1 + e12), d2 * (d1 * (1 + e12) - 1), -p["c42"]};
      M[2] = {-t13, d1 * (1 + t13) + p["e23"], d2 * (1 - d1 * (1 + t13) - p["e23"]), -p["c43"]};
      M[3] = {-c14, d1 * (1 + c14) - t24, d2 * (1 + t24) - d1 * d2 * (1 + c14) + p["e34"], 0.0};
      detail::fold_total(sys, 0, 1.0);
      detail::fold_total(sys, 1, -1.0);
      detail::fold_total(sys, 2, 1.0);
      detail::fold_total(sys, 3, 1.0);
      break;
    }
    case CaseId::four: {
      const double e12 = p["e12"], c13 = p["c13"], c14 = p["c14"], e23 = p["e23"];
      const double t24 = p["t24"], e34 = p["e34"], c31 = p["c31"];
      M[0] = {0.0, d1, d2 * (1 - d1) - c31, d3 * (1 + c31) + d2 * d3 * (d1 - 1) + p["e41"]};
      M[1] = {e12, -d1 * (1 + e12), d2 * (d1 * (1 + e12) - 1),
              -(d1 * d2 * d3 * (1 + e12) + d3 * (1 - d2) + p["c42"])};
      M[2] = {-c13, d1 * (1 + c13) + e23, d2 * (1 - d1 * (1 + c13) - e23),
              d3 * (d1 * d2 * (1 + c13) + d2 * (e23 - 1) + 1)};
      M[3] = {-c14, d1 * (1 + c14) - t24, d2 * (1 + t24) - d1 * d2 * (1 + c14) + e34,
              d3 * (d1 * d2 * (1 + c14) - d2 * (1 + t24) - e34 + 1)};
      detail::fold_total(sys, 0, 1.0);
      detail::fold_total(sys, 1, -1.0);
      detail::fold_total(sys, 2, 1.0);
      detail::fold_total(sys, 3, 1.0);
      break;
    }
  }
  return sys;
}

struct Equilibrium {
  std::size_t index;  // 0-based: index 0 is xi_1
  Vec4 x;
};

/// The four equilibria in cycle order. An axis equilibrium is the unit vector
/// e_i; a planar one in the (x_{i-1}, x_i) plane has x_i = 1, x_{i-1} = d_{i-1}.
inline std::array<Equilibrium, 4> equilibria(const ParameterSet& p) {
  const CaseSpec spec = case_spec(p.case_id());
  std::array<Equilibrium, 4> eq{};
  for (std::size_t i = 0; i < 4; ++i) {
    eq[i].index = i;
    eq[i].x = {};
    eq[i].x[i] = 1.0;
    if (spec.location(i) == Location::plane) eq[i].x[cyc(i, -1)] = p["d" + std::to_string(i)];
  }
  return eq;
}

}  // namespace hetcycle
