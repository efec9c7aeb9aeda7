#pragma once

// Parameter sets of the published example runs (two per case: a stable and an
// unstable cycle) and their shared initial condition.

#include <map>
#include <string>
#include <vector>

#include "hetcycle/model.hpp"

namespace hetcycle {

struct Preset {
  std::string name;  // "fig9a" ... "fig12b"
  CaseId case_id;
  char variant;  // 'a' (stable) or 'b' (unstable)
  ParameterSet params;
  double published_delta;      // as printed, 5 decimal places
  double log10_x4_initial;     // -600 for variant a, -900 for variant b
};

inline const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = [] {
    std::vector<Preset> v;
    auto add = [&](std::string name, CaseId id, char variant, std::map<std::string, double> common,
                   const std::map<std::string, double>& extra, double delta) {
      for (const auto& [k, x] : extra) common[k] = x;
      v.push_back(Preset{std::move(name), id, variant, ParameterSet(id, std::move(common)), delta,
                         variant == 'a' ? -600.0 : -900.0});
    };
    const std::map<std::string, double> c1{{"d1", 1.1},  {"d3", 1.1},  {"e12", 1.3}, {"c13", 0.5},
                                           {"c14", 0.6}, {"t24", 1.3}, {"e34", 1.3}, {"c31", 0.6},
                                           {"c32", 0.4}, {"t42", 1.2}};
    add("fig9a", CaseId::one, 'a', c1, {{"e23", 0.8}, {"e41", 0.8}}, 1.08654);
    add("fig9b", CaseId::one, 'b', c1, {{"e23", 0.9}, {"e41", 0.9}}, 0.93886);

    const std::map<std::string, double> c2{{"d1", 1.1},  {"t13", 0.3}, {"c14", 0.5},
                                           {"t24", 0.9}, {"c31", 0.4}, {"c32", 0.5},
                                           {"e41", 0.5}, {"t42", 0.9}, {"c43", 0.8}};
    add("fig10a", CaseId::two, 'a', c2, {{"e12", 1.2}, {"e23", 0.7}, {"e34", 1.6}}, 1.07708);
    add("fig10b", CaseId::two, 'b', c2, {{"e12", 1.3}, {"e23", 0.8}, {"e34", 1.8}}, 0.83665);

    const std::map<std::string, double> c3{{"d1", 1.1},  {"d2", 1.0},  {"t13", 0.3}, {"c14", 0.5},
                                           {"t24", 0.9}, {"e34", 1.6}, {"c31", 0.4}, {"e41", 0.4},
                                           {"c42", 0.9}, {"c43", 0.8}};
    add("fig11a", CaseId::three, 'a', c3, {{"e12", 1.2}, {"e23", 0.7}}, 1.05804);
    add("fig11b", CaseId::three, 'b', c3, {{"e12", 1.3}, {"e23", 0.9}}, 0.84615);

    const std::map<std::string, double> c4{{"d1", 1.3},  {"d2", 1.1},  {"d3", 1.1}, {"e12", 0.9},
                                           {"c13", 0.3}, {"c14", 0.5}, {"e23", 0.7}, {"t24", 0.9},
                                           {"e34", 1.6}, {"c31", 0.4}, {"c42", 0.9}};
    add("fig12a", CaseId::four, 'a', c4, {{"e41", 0.2}}, 1.10714);
    add("fig12b", CaseId::four, 'b', c4, {{"e41", 0.3}}, 0.73810);
    return v;
  }();
  return all;
}

inline const Preset& preset(const std::string& name) {
  for (const auto& p : presets())
    if (p.name == name) return p;
  throw InputError("unknown preset '" + name + "' (expected fig9a..fig12b)");
}

inline const Preset& preset(CaseId id, char variant) {
  for (const auto& p : presets())
    if (p.case_id == id && p.variant == variant) return p;
  throw InputError(std::string("unknown variant '") + variant + "' (expected a or b)");
}

}  // namespace hetcycle
