#pragma once

// JSON and CSV serialization. JSON numbers use the shortest round-trip
// decimal form; CSV numbers use 17 significant digits.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hetcycle/errors.hpp"
#include "hetcycle/integrate.hpp"
#include "hetcycle/model.hpp"
#include "hetcycle/spectrum.hpp"
#include "hetcycle/stability.hpp"

namespace hetcycle {

using Json = nlohmann::ordered_json;

inline std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Base-10 logarithm of a positive decimal such as "1e-600" or "2.5E-6000",
/// computed from mantissa and exponent so values below the double range work.
inline double parse_log10(const std::string& text) {
  static const std::regex pattern(R"(^\s*\+?((?:\d+\.?\d*)|(?:\.\d+))(?:[eE]([+-]?\d+))?\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) throw InputError("not a positive number: '" + text + "'");
  const double mantissa = std::stod(m[1].str());
  if (!(mantissa > 0.0)) throw InputError("value must be positive: '" + text + "'");
  double exponent = 0.0;
  if (m[2].matched) {
    try {
      exponent = static_cast<double>(std::stoll(m[2].str()));
    } catch (const std::out_of_range&) {
      throw InputError("exponent out of range: '" + text + "'");
    }
  }
  return std::log10(mantissa) + exponent;
}

/// Natural logarithm of a positive decimal, see parse_log10.
inline double parse_log(const std::string& text) { return parse_log10(text) * std::log(10.0); }

// --- parameter sets -------------------------------------------------------

inline Json to_json(const ParameterSet& p) {
  Json j;
  j["case"] = to_int(p.case_id());
  for (const auto& [k, v] : p.values()) j[k] = v;
  return j;
}

/// Parse a flat {"case": n, "d1": ..., "e12": ...} object. `expected_case`
/// (if nonzero) is used when "case" is absent and must match when present.
inline ParameterSet parameters_from_json(const Json& j, int expected_case = 0) {
  if (!j.is_object()) throw InputError("parameter document must be a JSON object");
  int id = expected_case;
  if (j.contains("case")) {
    const auto& c = j.at("case");
    if (!c.is_number_integer()) throw InputError("\"case\" must be an integer 1..4");
    const int file_case = c.get<int>();
    if (expected_case != 0 && file_case != expected_case)
      throw InputError("parameter file is for case " + std::to_string(file_case) +
                       " but case " + std::to_string(expected_case) + " was requested");
    id = file_case;
  }
  if (id == 0) throw InputError("parameter document has no \"case\" and none was given");
  const CaseId cid = case_from_int(id);

  std::map<std::string, double> values;
  const auto keys = required_keys(cid);
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() == "case") continue;
    if (!std::binary_search(keys.begin(), keys.end(), it.key()))
      throw InputError("unknown parameter '" + it.key() + "' for case " + std::to_string(id));
    if (!it.value().is_number())
      throw InputError("parameter '" + it.key() + "' must be a number");
    values[it.key()] = it.value().get<double>();
  }
  return ParameterSet(cid, std::move(values));
}

inline ParameterSet load_parameters(const std::string& path, int expected_case = 0) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open parameter file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("parameter file '" + path + "' is not valid JSON: " + e.what());
  }
  return parameters_from_json(j, expected_case);
}

// --- reports ---------------------------------------------------------------

inline Json to_json(const SmallMatrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

inline Json to_json(const std::complex<double>& z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

inline Json to_json(const RadialBlock& b) {
  Json j;
  j["equilibrium"] = b.equilibrium + 1;
  Json sup = Json::array();
  for (auto k : b.support.indices()) sup.push_back(k + 1);
  j["support"] = sup;
  j["matrix"] = to_json(b.matrix);
  Json ev = Json::array();
  for (const auto& z : b.eigenvalues) ev.push_back(to_json(z));
  j["eigenvalues"] = ev;
  j["stable"] = b.stable;
  return j;
}

inline Json to_json(const EigenReport& rep, const std::array<RadialBlock, 4>& blocks) {
  Json j;
  j["case"] = to_int(rep.case_id);
  j["theorem1"] = check_theorem1(rep);
  Json eqs = Json::array();
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& e = rep.equilibria[i];
    Json je;
    je["index"] = e.index + 1;
    je["x"] = e.x;
    Json entries = Json::array();
    for (const auto& en : e.entries) {
      Json x;
      x["role"] = to_string(en.role);
      if (en.direction) x["direction"] = *en.direction + 1;
      else x["direction"] = "radial-block";
      x["re"] = en.value.real();
      x["im"] = en.value.imag();
      entries.push_back(x);
    }
    je["entries"] = entries;
    je["contracting_count"] = e.count(Role::contracting);
    je["radial_block"] = to_json(blocks[i]);
    eqs.push_back(je);
  }
  j["equilibria"] = eqs;
  return j;
}

inline Json to_json(const StabilityReport& rep) {
  Json j;
  j["case"] = to_int(rep.case_id);
  j["parameters"] = to_json(rep.params);
  j["delta"] = rep.delta;
  j["predicted"] = to_string(rep.predicted);
  Json ratios = Json::object();
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t k = 0; k < 4; ++k) {
      const std::string tag = std::to_string(i + 1) + "^(" + std::to_string(k + 1) + ")";
      if (rep.ratios.a[i][k]) ratios["a" + tag] = *rep.ratios.a[i][k];
      if (rep.ratios.b[i][k]) ratios["b" + tag] = *rep.ratios.b[i][k];
    }
  j["ratios"] = ratios;
  Json segs = Json::array();
  for (const auto& s : rep.segments) {
    segs.push_back(Json{{"equilibrium", s.equilibrium + 1},
                        {"kind", to_string(s.kind)},
                        {"shape", s.matrix.shape()},
                        {"matrix", to_json(s.matrix)}});
  }
  j["segments"] = segs;
  Json radial = Json::array();
  bool all_stable = true;
  for (const auto& b : rep.radial) {
    radial.push_back(to_json(b));
    all_stable = all_stable && b.stable;
  }
  j["radial"] = radial;
  j["radially_stable"] = all_stable;
  return j;
}

// --- CSV -------------------------------------------------------------------

struct ExportOptions {
  std::size_t stride = 1;  // keep every stride-th sample (the last one always)
  bool log10 = false;      // convert natural logs to base 10
};

inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                                 const ExportOptions& opt = {}) {
  const double scale = opt.log10 ? 1.0 / std::log(10.0) : 1.0;
  const std::size_t stride = opt.stride == 0 ? 1 : opt.stride;
  os << "t,u1,u2,u3,u4\n";
  const auto& s = traj.samples;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (k % stride != 0 && k + 1 != s.size()) continue;
    os << csv_number(s[k].t);
    for (double u : s[k].u) os << ',' << csv_number(u * scale);
    os << '\n';
  }
}

inline void write_events_csv(std::ostream& os, const std::vector<Event>& events,
                             const ExportOptions& opt = {}) {
  const double scale = opt.log10 ? 1.0 / std::log(10.0) : 1.0;
  os << "kind,t,u4\n";
  for (const auto& e : events) os << e.kind << ',' << csv_number(e.t) << ',' << csv_number(e.u[3] * scale) << '\n';
}

inline void write_sweep_csv(std::ostream& os, const SweepResult& res) {
  os << "param,delta\n";
  for (const auto& p : res.curve) os << csv_number(p.value) << ',' << csv_number(p.delta) << '\n';
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << content;
  if (!out) throw InputError("failed writing '" + path + "'");
}

}  // namespace hetcycle
