#include "hetcycle/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hetcycle/hetcycle.hpp"

namespace hetcycle::cli {
namespace {

struct Source {
  int case_id = 0;
  std::string preset;
  std::string params;
  std::string variant;
};

struct RunOptions {
  std::string x4;
  std::string ceiling = "1e-3";
  std::string departure = "1e-1";
  double tol = 1e-10;
  double agree_tol = 0.05;
  double t_max = 1e9;
  std::size_t max_minima = 12;
  std::string out;
  std::size_t stride = 1;
  bool log10 = false;
};

void add_source(CLI::App* cmd, Source& s, bool with_variant) {
  cmd->add_option("--case", s.case_id, "Case number 1-4")->check(CLI::Range(1, 4));
  cmd->add_option("--preset", s.preset, "Published parameter set, fig9a ... fig12b");
  cmd->add_option("--params", s.params, "Parameter file (flat JSON object)");
  if (with_variant) cmd->add_option("--variant", s.variant, "Published variant a or b (with --case)");
}

void add_run_options(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("--x4", o.x4, "Initial x4, e.g. 1e-600");
  cmd->add_option("--tol", o.tol, "Absolute and relative integrator tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--ceiling", o.ceiling, "Minima of x4 at or above this level are ignored");
  cmd->add_option("--departure", o.departure, "Run ends once every coordinate exceeds this level");
  cmd->add_option("--agree-tol", o.agree_tol, "Relative tolerance for ratio agreement")->check(CLI::PositiveNumber);
  cmd->add_option("--t-max", o.t_max, "Integration time limit")->check(CLI::PositiveNumber);
  cmd->add_option("--max-minima", o.max_minima, "Stop after this many minima")->check(CLI::Range(3, 100000));
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--stride", o.stride, "Keep every n-th trajectory sample")->check(CLI::PositiveNumber);
  cmd->add_flag("--log10", o.log10, "Export base-10 logarithms instead of natural ones");
}

const Preset* find_preset(const Source& s) {
  if (!s.preset.empty()) {
    const Preset& p = preset(s.preset);
    if (s.case_id != 0 && s.case_id != to_int(p.case_id))
      throw InputError("preset " + s.preset + " belongs to case " + std::to_string(to_int(p.case_id)) +
                       ", not case " + std::to_string(s.case_id));
    if (!s.variant.empty() && s.variant != std::string(1, p.variant))
      throw InputError("preset " + s.preset + " is variant " + std::string(1, p.variant));
    return &p;
  }
  if (!s.variant.empty() && s.params.empty()) {
    if (s.case_id == 0) throw InputError("--variant needs --case");
    if (s.variant.size() != 1) throw InputError("variant must be a or b");
    return &preset(case_from_int(s.case_id), s.variant[0]);
  }
  return nullptr;
}

ParameterSet resolve(const Source& s) {
  const int sources = (s.preset.empty() ? 0 : 1) + (s.params.empty() ? 0 : 1);
  if (sources > 1) throw InputError("give exactly one of --preset and --params");
  if (const Preset* p = find_preset(s)) return p->params;
  if (!s.params.empty()) return load_parameters(s.params, s.case_id);
  throw InputError("no parameters: give --preset, --params or --case with --variant");
}

SimulationConfig make_config(const RunOptions& o) {
  SimulationConfig cfg;
  cfg.integrator.atol = o.tol;
  cfg.integrator.rtol = o.tol;
  cfg.ceiling = parse_log(o.ceiling);
  cfg.departure = parse_log(o.departure);
  cfg.tolerance = o.agree_tol;
  cfg.t_max = o.t_max;
  cfg.max_minima = o.max_minima;
  return cfg;
}

void write_json_file(const std::string& dir, const std::string& name, const Json& j) {
  if (dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw InputError("cannot create output directory '" + dir + "'");
  write_file((std::filesystem::path(dir) / name).string(), j.dump(2) + "\n");
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

int report_run(const ReproductionOutput& r, std::ostream& out, std::ostream& err) {
  out << to_json(r.verdict).dump(2) << "\n";
  if (r.simulation.trajectory.failed()) {
    err << "integration failed: " << r.simulation.trajectory.message << "\n";
    return kExitIntegration;
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stability tools for heteroclinic cycles of Lotka-Volterra systems in R^4"};
  app.require_subcommand(1);

  Source src;
  RunOptions run_opt;
  std::string out_dir;
  std::vector<std::string> keys;
  double lo = 0.0, hi = 0.0;
  std::size_t n = 101;

  auto* assemble = app.add_subcommand("assemble", "Print r and M of the Lotka-Volterra form");
  add_source(assemble, src, false);
  auto* classify_cmd = app.add_subcommand("classify", "Eigenvalue roles at every equilibrium (JSON)");
  add_source(classify_cmd, src, false);
  classify_cmd->add_option("--out", out_dir, "Also write eigen.json here");
  auto* delta_cmd = app.add_subcommand("delta", "Stability index delta and radial verdicts");
  add_source(delta_cmd, src, false);
  delta_cmd->add_option("--out", out_dir, "Also write stability.json here");
  auto* simulate_cmd = app.add_subcommand("simulate", "Simulate any parameter set and compare with delta");
  add_source(simulate_cmd, src, true);
  add_run_options(simulate_cmd, run_opt);
  auto* reproduce_cmd = app.add_subcommand("reproduce", "Rerun one of the eight published examples");
  add_source(reproduce_cmd, src, true);
  add_run_options(reproduce_cmd, run_opt);
  auto* sweep_cmd = app.add_subcommand("sweep", "delta along a joint parameter sweep and its roots");
  add_source(sweep_cmd, src, false);
  sweep_cmd->add_option("--keys", keys, "Parameters set jointly to the grid value")->required()->delimiter(',');
  sweep_cmd->add_option("--lo", lo, "Lower end of the range")->required();
  sweep_cmd->add_option("--hi", hi, "Upper end of the range")->required();
  sweep_cmd->add_option("--n", n, "Number of grid points")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--out", out_dir, "Write sweep.csv here instead of stdout");

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (assemble->parsed()) {
      const ParameterSet p = resolve(src);
      const LVSystem sys = assemble_system(p);
      Json j;
      j["case"] = to_int(p.case_id());
      j["r"] = sys.r;
      Json m = Json::array();
      for (const auto& row : sys.M) m.push_back(row);
      j["M"] = m;
      Json eqs = Json::array();
      for (const auto& e : equilibria(p)) eqs.push_back(Json{{"index", e.index + 1}, {"x", e.x}});
      j["equilibria"] = eqs;
      out << j.dump(2) << "\n";
      return kExitOk;
    }
    if (classify_cmd->parsed()) {
      const ParameterSet p = resolve(src);
      const Json j = to_json(classify(p), radial_stability(p));
      write_json_file(out_dir, "eigen.json", j);
      out << j.dump(2) << "\n";
      return kExitOk;
    }
    if (delta_cmd->parsed()) {
      const ParameterSet p = resolve(src);
      const StabilityReport rep = delta(p);
      write_json_file(out_dir, "stability.json", to_json(rep));
      out << "case " << to_int(rep.case_id) << "\n";
      out << "delta " << fixed(rep.delta, 10) << "\n";
      out << "predicted " << to_string(rep.predicted) << "\n";
      for (const auto& b : rep.radial)
        out << "radial xi" << b.equilibrium + 1 << " " << (b.stable ? "stable" : "unstable") << "\n";
      return kExitOk;
    }
    if (simulate_cmd->parsed() || reproduce_cmd->parsed()) {
      const SimulationConfig cfg = make_config(run_opt);
      const ExportOptions exp{run_opt.stride, run_opt.log10};
      if (reproduce_cmd->parsed()) {
        const Preset* p = find_preset(src);
        if (!p || !src.params.empty())
          throw InputError("reproduce needs --preset, or --case with --variant");
        const double depth = run_opt.x4.empty() ? p->log10_x4_initial : parse_log10(run_opt.x4);
        return report_run(run_and_report(p->params, std::string(1, p->variant), depth, cfg, run_opt.out, exp),
                          out, err);
      }
      const ParameterSet params = resolve(src);
      const Preset* p = find_preset(src);
      const double depth = !run_opt.x4.empty() ? parse_log10(run_opt.x4)
                           : p                 ? p->log10_x4_initial
                                               : -600.0;
      const std::string label = p ? std::string(1, p->variant) : "custom";
      return report_run(run_and_report(params, label, depth, cfg, run_opt.out, exp), out, err);
    }
    if (sweep_cmd->parsed()) {
      const ParameterSet p = resolve(src);
      const SweepResult res = boundary_sweep(p, keys, lo, hi, n);
      std::ostringstream csv;
      write_sweep_csv(csv, res);
      if (out_dir.empty()) {
        out << csv.str();
      } else {
        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        if (ec || !std::filesystem::is_directory(out_dir))
          throw InputError("cannot create output directory '" + out_dir + "'");
        write_file((std::filesystem::path(out_dir) / "sweep.csv").string(), csv.str());
      }
      for (double r : res.roots) out << "root " << fixed(r, 10) << "\n";
      return kExitOk;
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const StructuralError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const AnalysisError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIntegration;
  }
  return kExitInvalid;
}

}  // namespace hetcycle::cli
