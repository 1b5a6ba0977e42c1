// Command-line front end: km, fit, cdf, density, hazard, bands and the
// simulate studies. Exit codes: 0 ok, 2 configuration error, 3 I/O error,
// 4 numeric/degenerate error; failures print machine-readable JSON on stderr.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ipcw/bands.hpp"
#include "ipcw/csv.hpp"
#include "ipcw/estimators.hpp"
#include "ipcw/simulation.hpp"
#include "ipcw/survival.hpp"
#include "ipcw/svg.hpp"
#include "ipcw/version.hpp"

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::vector<double> linspace(double lo, double hi, int steps) {
  if (steps < 1) throw ipcw::ConfigError("grid needs at least one point");
  std::vector<double> out(static_cast<std::size_t>(steps));
  if (steps == 1) {
    out[0] = 0.5 * (lo + hi);
    return out;
  }
  for (int i = 0; i < steps; ++i) {
    out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (steps - 1);
  }
  return out;
}

//! "lo:hi:steps" -> linspace
std::vector<double> parse_grid_axis(const std::string& spec) {
  double lo = 0.0, hi = 0.0;
  int steps = 0;
  char c1 = 0, c2 = 0;
  std::istringstream ss(spec);
  if (!(ss >> lo >> c1 >> hi >> c2 >> steps) || c1 != ':' || c2 != ':' ||
      !ss.eof()) {
    throw ipcw::ConfigError("bad grid spec '" + spec +
                            "' (expected lo:hi:steps)");
  }
  return linspace(lo, hi, steps);
}

//! "lo:hi[,lo:hi...]" -> region box
ipcw::Region parse_region(const std::string& spec) {
  std::vector<std::array<double, 2>> bounds;
  std::istringstream ss(spec);
  std::string axis;
  while (std::getline(ss, axis, ',')) {
    double lo = 0.0, hi = 0.0;
    char c = 0;
    std::istringstream as(axis);
    if (!(as >> lo >> c >> hi) || c != ':' || !as.eof()) {
      throw ipcw::ConfigError("bad region axis '" + axis +
                              "' (expected lo:hi)");
    }
    bounds.push_back({lo, hi});
  }
  return ipcw::Region(std::move(bounds));
}

ipcw::BandwidthRule parse_bandwidth(const std::string& spec) {
  const auto fail = [&spec]() -> ipcw::BandwidthRule {
    throw ipcw::ConfigError(
        "bad bandwidth '" + spec +
        "' (expected fixed:h, power:A:delta0 or table:file.csv)");
  };
  const auto colon = spec.find(':');
  if (colon == std::string::npos) return fail();
  const std::string kind = spec.substr(0, colon);
  const std::string rest = spec.substr(colon + 1);
  try {
    if (kind == "fixed") {
      return ipcw::FixedBandwidth{std::stod(rest)};
    }
    if (kind == "power") {
      const auto colon2 = rest.find(':');
      if (colon2 == std::string::npos) return fail();
      return ipcw::PowerLawBandwidth{std::stod(rest.substr(0, colon2)),
                                     std::stod(rest.substr(colon2 + 1))};
    }
  } catch (const std::logic_error&) {
    return fail();
  }
  if (kind == "table") {
    const auto rows = ipcw::read_xy_csv(rest);
    ipcw::PerPointBandwidth table;
    for (const auto& [x, h] : rows) {
      table.points.push_back({x});
      table.h.push_back(h);
    }
    return table;
  }
  return fail();
}

//! "identity" | "indicator:t"
ipcw::Transform parse_psi(const std::string& spec) {
  if (spec == "identity") return ipcw::Transform::identity();
  if (spec.rfind("indicator:", 0) == 0) {
    try {
      return ipcw::Transform::indicator_leq(std::stod(spec.substr(10)));
    } catch (const std::logic_error&) {
    }
  }
  throw ipcw::ConfigError("bad psi '" + spec +
                          "' (expected identity or indicator:t)");
}

ipcw::GSpec make_gspec(const std::string& known_g_path) {
  if (known_g_path.empty()) return ipcw::GSpec::kaplan_meier();
  return ipcw::GSpec::known(ipcw::read_step_csv(known_g_path));
}

std::string provenance(const std::string& command, const ordered_json& cfg) {
  ordered_json j = cfg;
  j["command"] = command;
  j["version"] = std::string(ipcw::kVersion);
  j["rng"] = std::string(ipcw::kRngName);
  return j.dump();
}

//! Fill variables from a JSON config file for options not set on the
//! command line (flags win on conflict).
class ConfigFill {
public:
  ConfigFill(CLI::App* cmd, const std::string& path) : cmd_(cmd) {
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw ipcw::IoError("cannot open config '" + path + "'");
    try {
      in >> cfg_;
    } catch (const json::exception& e) {
      throw ipcw::ConfigError("config '" + path + "': " + e.what());
    }
  }

  template <typename T>
  void operator()(const std::string& key, T& var) const {
    if (cfg_.is_null() || !cfg_.contains(key)) return;
    const auto* opt = cmd_->get_option_no_throw("--" + key);
    if (opt != nullptr && opt->count() > 0) return;
    try {
      var = cfg_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ipcw::ConfigError("config key '" + key + "': " + e.what());
    }
  }

private:
  CLI::App* cmd_;
  json cfg_;
};

void write_text(const std::string& path_or_dash, const std::string& content) {
  if (path_or_dash == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path_or_dash);
  if (!out) throw ipcw::IoError("cannot open '" + path_or_dash + "'");
  out << content;
}

//! Write a CSV through the library writer, or echo it to stdout.
template <typename WriteFn>
void emit_csv(const std::string& path_or_dash, WriteFn&& write) {
  if (path_or_dash != "-") {
    write(std::filesystem::path(path_or_dash));
    return;
  }
  const std::filesystem::path tmp =
      std::filesystem::temp_directory_path() /
      ("ipcw_stdout_" + std::to_string(::getpid()) + ".csv");
  write(tmp);
  std::ifstream in(tmp);
  std::cout << in.rdbuf();
  in.close();
  std::filesystem::remove(tmp);
}

// ---------------------------------------------------------------------------
// shared estimator-grid machinery for fit/cdf/density/hazard

struct EstimateArgs {
  std::string data_path;
  std::string grid_spec;
  double h = 0.0;
  std::string h_grid;
  std::string kernel_name = "epanechnikov";
  std::string psi_spec = "identity";
  double tau0 = std::numeric_limits<double>::quiet_NaN();
  std::string known_g;
  double t = 0.0;
  double ell = 0.0;
  double guard = 1e-10;
  std::string out = "-";
  std::string config;
};

void add_common_estimate_options(CLI::App* cmd, EstimateArgs& args,
                                 bool needs_t, bool needs_ell) {
  cmd->add_option("--data", args.data_path, "input dataset CSV")->required();
  cmd->add_option("--grid", args.grid_spec,
                  "covariate grid lo:hi:steps[,lo:hi:steps...]");
  cmd->add_option("--h", args.h, "bandwidth");
  cmd->add_option("--h-grid", args.h_grid, "bandwidth grid lo:hi:steps");
  cmd->add_option("--kernel", args.kernel_name,
                  "epanechnikov | box | triangular");
  cmd->add_option("--tau0", args.tau0, "advisory upper cutoff");
  cmd->add_option("--known-g", args.known_g,
                  "known censoring CDF as a (u,g) CSV step table");
  if (needs_t) cmd->add_option("--t", args.t, "evaluation time")->required();
  if (needs_ell) {
    cmd->add_option("--ell", args.ell, "response-direction bandwidth")
        ->required();
  }
  cmd->add_option("--guard", args.guard, "hazard denominator guard");
  cmd->add_option("--out", args.out, "output CSV path ('-' for stdout)");
  cmd->add_option("--config", args.config, "JSON config (flags win)");
}

void fill_common(const ConfigFill& fill, EstimateArgs& args) {
  fill("data", args.data_path);
  fill("grid", args.grid_spec);
  fill("h", args.h);
  fill("h-grid", args.h_grid);
  fill("kernel", args.kernel_name);
  fill("psi", args.psi_spec);
  fill("tau0", args.tau0);
  fill("known-g", args.known_g);
  fill("t", args.t);
  fill("ell", args.ell);
  fill("guard", args.guard);
  fill("out", args.out);
}

//! Cartesian product of per-axis grids.
std::vector<std::vector<double>> build_grid(const std::string& spec, int dim) {
  std::vector<std::vector<double>> axes;
  std::istringstream ss(spec);
  std::string axis;
  while (std::getline(ss, axis, ',')) axes.push_back(parse_grid_axis(axis));
  if (static_cast<int>(axes.size()) != dim) {
    throw ipcw::ConfigError("grid has " + std::to_string(axes.size()) +
                            " axes, dataset has dimension " +
                            std::to_string(dim));
  }
  std::vector<std::vector<double>> points{{}};
  for (const auto& ax : axes) {
    std::vector<std::vector<double>> next;
    next.reserve(points.size() * ax.size());
    for (const auto& p : points) {
      for (const double v : ax) {
        auto q = p;
        q.push_back(v);
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  return points;
}

std::vector<double> bandwidth_list(const EstimateArgs& args) {
  if (!args.h_grid.empty()) return parse_grid_axis(args.h_grid);
  if (args.h > 0.0) return {args.h};
  throw ipcw::ConfigError("one of --h or --h-grid is required");
}

enum class EstimateKind { regression, cdf, density, hazard };

int run_estimate(EstimateKind kind, const EstimateArgs& args,
                 const std::string& command) {
  const ipcw::Dataset data = ipcw::read_dataset_csv(args.data_path);
  const ipcw::KernelSpec kernel =
      ipcw::KernelSpec::from_name(args.kernel_name, data.dim());
  const ipcw::GSpec g = make_gspec(args.known_g);
  if (args.grid_spec.empty()) {
    throw ipcw::ConfigError("--grid is required");
  }
  const auto grid = build_grid(args.grid_spec, data.dim());
  const auto hs = bandwidth_list(args);

  ipcw::Transform psi = parse_psi(args.psi_spec);
  const bool has_tau0 = !std::isnan(args.tau0);
  if (has_tau0) psi = psi.with_upper_cutoff(args.tau0);
  const bool beyond_cutoff =
      has_tau0 && kind != EstimateKind::regression && args.t > args.tau0;

  std::vector<ipcw::EstimateRow> rows;
  std::size_t usable = 0;
  for (const double h : hs) {
    for (const auto& x : grid) {
      ipcw::EstimateRow row;
      row.x = x;
      row.h = h;
      try {
        switch (kind) {
          case EstimateKind::regression:
            row.estimate = ipcw::ipcw_regression(data, psi, x, h, kernel, g);
            break;
          case EstimateKind::cdf:
            row.estimate =
                ipcw::conditional_cdf(data, args.t, x, h, kernel, g).value;
            break;
          case EstimateKind::density:
            row.estimate = ipcw::conditional_density(data, args.t, x, h,
                                                     args.ell, kernel, g);
            break;
          case EstimateKind::hazard:
            row.estimate = ipcw::conditional_hazard(
                data, args.t, x, h, args.ell, kernel, g, args.guard);
            break;
        }
        row.flag = beyond_cutoff ? "beyond_tau0" : "ok";
        ++usable;
      } catch (const ipcw::EmptyWindowError&) {
        row.flag = "empty_window";
      } catch (const ipcw::DegenerateDenominatorError&) {
        row.flag = "degenerate";
      }
      rows.push_back(std::move(row));
    }
  }
  if (usable == 0) {
    throw ipcw::NumericError("no grid point could be estimated");
  }

  const ordered_json cfg{{"data", args.data_path},
                         {"kernel", args.kernel_name},
                         {"psi", args.psi_spec},
                         {"g", g.label()}};
  emit_csv(args.out, [&](const std::filesystem::path& p) {
    ipcw::write_estimates_csv(p, rows, data.dim(), provenance(command, cfg));
  });
  return 0;
}

// ---------------------------------------------------------------------------

ipcw::SvgSeries band_series(const ipcw::EstimateCurve& curve, int which,
                            const std::string& label, const std::string& color,
                            bool dashed) {
  ipcw::SvgSeries s;
  s.label = label;
  s.color = color;
  s.dashed = dashed;
  for (const auto& pt : curve.points) {
    s.x.push_back(pt.x[0]);
    if (pt.missing()) {
      s.y.push_back(std::numeric_limits<double>::quiet_NaN());
    } else {
      s.y.push_back(which == 0 ? pt.estimate
                               : (which == 1 ? pt.lower : pt.upper));
    }
  }
  return s;
}

void write_band_figure(const std::string& svg_path,
                       const ipcw::EstimateCurve& curve,
                       const std::vector<std::pair<double, double>>& truth,
                       const std::string& title) {
  std::vector<ipcw::SvgSeries> series;
  series.push_back(band_series(curve, 0, "estimate", "#1f5fa8", false));
  series.push_back(band_series(curve, 1, "lower band", "#c44e52", true));
  series.push_back(band_series(curve, 2, "upper band", "#c44e52", true));
  if (!truth.empty()) {
    ipcw::SvgSeries t;
    t.label = "truth";
    t.color = "#3a923a";
    for (const auto& [x, y] : truth) {
      t.x.push_back(x);
      t.y.push_back(y);
    }
    series.push_back(std::move(t));
  }
  ipcw::write_svg_plot(svg_path, series, title);
}

int error_exit(const std::string& type, const std::string& message, int code) {
  const json err{{"error", {{"type", type}, {"message", message}}}};
  std::cerr << err.dump() << "\n";
  return code;
}

//! The spec's --h bandwidth flag clashes with the default -h help alias.
CLI::App* long_help_only(CLI::App* cmd) {
  cmd->set_help_flag("--help", "print help and exit");
  return cmd;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IPCW kernel estimators under right censoring"};
  long_help_only(&app);
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ipcw::kVersion));

  // --- km ---
  struct {
    std::string data, out = "-", config;
  } km_args;
  auto* km_cmd = long_help_only(app.add_subcommand(
      "km", "Kaplan-Meier estimate of the censoring distribution"));
  km_cmd->add_option("--data", km_args.data, "input dataset CSV")->required();
  km_cmd->add_option("--out", km_args.out, "output CSV ('-' for stdout)");
  km_cmd->add_option("--config", km_args.config, "JSON config (flags win)");

  // --- fit / cdf / density / hazard ---
  EstimateArgs fit_args, cdf_args, density_args, hazard_args;
  auto* fit_cmd = long_help_only(
      app.add_subcommand("fit", "IPCW regression estimate over a grid"));
  add_common_estimate_options(fit_cmd, fit_args, false, false);
  fit_cmd->add_option("--psi", fit_args.psi_spec, "identity | indicator:t");

  auto* cdf_cmd = long_help_only(
      app.add_subcommand("cdf", "conditional distribution function estimate"));
  add_common_estimate_options(cdf_cmd, cdf_args, true, false);

  auto* density_cmd = long_help_only(
      app.add_subcommand("density", "conditional density estimate"));
  add_common_estimate_options(density_cmd, density_args, true, true);

  auto* hazard_cmd = long_help_only(
      app.add_subcommand("hazard", "conditional hazard rate estimate"));
  add_common_estimate_options(hazard_cmd, hazard_args, true, true);

  // --- bands ---
  struct {
    std::string data;
    std::string psi = "identity";
    std::string kernel = "epanechnikov";
    double theta = std::exp(1.0);
    std::string region = "-1:1";
    std::string bandwidth;
    int grid_steps = 201;
    std::string known_g, truth, svg, out = "-", config;
    double tau0 = std::numeric_limits<double>::quiet_NaN();
    unsigned threads = 0;
  } bands_args;
  auto* bands_cmd = long_help_only(app.add_subcommand(
      "bands", "simultaneous confidence bands for the regression function"));
  bands_cmd->add_option("--data", bands_args.data, "input dataset CSV")
      ->required();
  bands_cmd->add_option("--psi", bands_args.psi, "identity | indicator:t");
  bands_cmd->add_option("--kernel", bands_args.kernel,
                        "epanechnikov | box | triangular");
  bands_cmd->add_option("--theta", bands_args.theta,
                        "floor constant in the log factor (> 1)");
  bands_cmd->add_option("--region", bands_args.region,
                        "region I as lo:hi[,lo:hi...]");
  bands_cmd
      ->add_option("--bandwidth", bands_args.bandwidth,
                   "fixed:h | power:A:delta0 | table:file.csv")
      ->required();
  bands_cmd->add_option("--grid", bands_args.grid_steps,
                        "equispaced grid points per axis");
  bands_cmd->add_option("--known-g", bands_args.known_g,
                        "known censoring CDF as a (u,g) CSV step table");
  bands_cmd->add_option("--truth", bands_args.truth,
                        "optional (x,value) CSV overlaid on the figure");
  bands_cmd->add_option("--svg", bands_args.svg, "optional SVG figure path");
  bands_cmd->add_option("--tau0", bands_args.tau0, "advisory upper cutoff");
  bands_cmd->add_option("--out", bands_args.out, "output CSV");
  bands_cmd->add_option("--threads", bands_args.threads, "worker threads");
  bands_cmd->add_option("--config", bands_args.config,
                        "JSON config (flags win)");

  // --- simulate ---
  auto* sim_cmd =
      long_help_only(app.add_subcommand("simulate", "Monte Carlo studies"));
  sim_cmd->require_subcommand(1);

  struct {
    int n = 2000;
    std::uint64_t seed = 1;
    std::string out = "-", config;
  } gen_args;
  auto* gen_cmd = long_help_only(
      sim_cmd->add_subcommand("generate", "draw one sample from the design"));
  gen_cmd->add_option("--n", gen_args.n, "sample size");
  gen_cmd->add_option("--seed", gen_args.seed, "RNG seed");
  gen_cmd->add_option("--out", gen_args.out, "output CSV");
  gen_cmd->add_option("--config", gen_args.config, "JSON config (flags win)");

  struct SimStudyArgs {
    int n = 2000;
    std::uint64_t seed = 1;
    double h = 0.15;
    int reps = 200;
    int grid_steps = 201;
    double theta = std::exp(1.0);
    std::string region = "-1:1";
    double inflation = 1.0;
    std::string out_csv, out_json, figures;
    unsigned threads = 0;
    std::string config;
  };
  SimStudyArgs eps_args, cov_args;

  const auto add_sim_options = [](CLI::App* cmd, SimStudyArgs& args) {
    cmd->add_option("--n", args.n, "sample size per replication");
    cmd->add_option("--seed", args.seed, "base seed");
    cmd->add_option("--h", args.h, "bandwidth");
    cmd->add_option("--reps", args.reps, "number of replications");
    cmd->add_option("--grid", args.grid_steps, "x-grid points on the region");
    cmd->add_option("--theta", args.theta, "band log-factor floor");
    cmd->add_option("--region", args.region, "region lo:hi");
    cmd->add_option("--out-csv", args.out_csv, "per-replication records CSV");
    cmd->add_option("--out-json", args.out_json, "summary JSON");
    cmd->add_option("--figures", args.figures,
                    "emit figure CSV/SVG files with this path prefix");
    cmd->add_option("--threads", args.threads, "worker threads");
    cmd->add_option("--config", args.config, "JSON config (flags win)");
  };
  auto* eps_cmd = long_help_only(sim_cmd->add_subcommand(
      "epsilon1", "distribution of the worst-point band gap"));
  add_sim_options(eps_cmd, eps_args);
  auto* cov_cmd = long_help_only(
      sim_cmd->add_subcommand("coverage", "simultaneous band coverage"));
  add_sim_options(cov_cmd, cov_args);
  cov_cmd->add_option("--inflation", cov_args.inflation,
                      "band halfwidth multiplier");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return error_exit("config", e.what(), 2);
  }

  try {
    if (km_cmd->parsed()) {
      const ConfigFill fill(km_cmd, km_args.config);
      fill("data", km_args.data);
      fill("out", km_args.out);
      const ipcw::Dataset data = ipcw::read_dataset_csv(km_args.data);
      const ipcw::StepFunction g = ipcw::km_censoring(data);
      const ordered_json cfg{{"data", km_args.data}};
      emit_csv(km_args.out, [&](const std::filesystem::path& p) {
        ipcw::write_km_csv(p, g, provenance("km", cfg));
      });
      return 0;
    }

    const auto run_estimate_cmd = [&](CLI::App* cmd, EstimateArgs& args,
                                      EstimateKind kind,
                                      const std::string& name) {
      const ConfigFill fill(cmd, args.config);
      fill_common(fill, args);
      return run_estimate(kind, args, name);
    };
    if (fit_cmd->parsed()) {
      return run_estimate_cmd(fit_cmd, fit_args, EstimateKind::regression,
                              "fit");
    }
    if (cdf_cmd->parsed()) {
      return run_estimate_cmd(cdf_cmd, cdf_args, EstimateKind::cdf, "cdf");
    }
    if (density_cmd->parsed()) {
      return run_estimate_cmd(density_cmd, density_args, EstimateKind::density,
                              "density");
    }
    if (hazard_cmd->parsed()) {
      return run_estimate_cmd(hazard_cmd, hazard_args, EstimateKind::hazard,
                              "hazard");
    }

    if (bands_cmd->parsed()) {
      const ConfigFill fill(bands_cmd, bands_args.config);
      fill("data", bands_args.data);
      fill("psi", bands_args.psi);
      fill("kernel", bands_args.kernel);
      fill("theta", bands_args.theta);
      fill("region", bands_args.region);
      fill("bandwidth", bands_args.bandwidth);
      fill("grid", bands_args.grid_steps);
      fill("known-g", bands_args.known_g);
      fill("truth", bands_args.truth);
      fill("svg", bands_args.svg);
      fill("out", bands_args.out);

      const ipcw::Dataset data = ipcw::read_dataset_csv(bands_args.data);
      const ipcw::Region region = parse_region(bands_args.region);
      if (region.dim() != data.dim()) {
        throw ipcw::ConfigError("region dimension does not match the dataset");
      }
      const ipcw::KernelSpec kernel =
          ipcw::KernelSpec::from_name(bands_args.kernel, data.dim());
      const ipcw::GSpec g = make_gspec(bands_args.known_g);
      ipcw::Transform psi = parse_psi(bands_args.psi);
      if (!std::isnan(bands_args.tau0)) {
        psi = psi.with_upper_cutoff(bands_args.tau0);
      }
      const ipcw::BandConfig cfg(bands_args.theta, region,
                                 parse_bandwidth(bands_args.bandwidth));

      std::vector<std::vector<double>> grid{{}};
      for (const auto& b : region.bounds()) {
        std::vector<std::vector<double>> next;
        for (const auto& p : grid) {
          for (const double v : linspace(b[0], b[1], bands_args.grid_steps)) {
            auto q = p;
            q.push_back(v);
            next.push_back(std::move(q));
          }
        }
        grid = std::move(next);
      }

      const ipcw::EstimateCurve curve = ipcw::confidence_band(
          data, psi, grid, kernel, g, cfg, bands_args.threads);
      for (const auto& w : curve.warnings) {
        std::cerr << "warning: " << w << "\n";
      }

      const ordered_json meta{{"data", bands_args.data},
                              {"psi", bands_args.psi},
                              {"theta", bands_args.theta},
                              {"bandwidth", bands_args.bandwidth},
                              {"region", bands_args.region}};
      emit_csv(bands_args.out, [&](const std::filesystem::path& p) {
        ipcw::write_band_csv(p, curve, data.dim(), provenance("bands", meta));
      });
      if (!bands_args.svg.empty()) {
        if (data.dim() != 1) {
          throw ipcw::ConfigError("--svg supports d = 1 only");
        }
        std::vector<std::pair<double, double>> truth;
        if (!bands_args.truth.empty()) {
          truth = ipcw::read_xy_csv(bands_args.truth);
        }
        write_band_figure(bands_args.svg, curve, truth,
                          "confidence band (" + bands_args.bandwidth + ")");
      }
      return 0;
    }

    if (gen_cmd->parsed()) {
      const ConfigFill fill(gen_cmd, gen_args.config);
      fill("n", gen_args.n);
      fill("seed", gen_args.seed);
      fill("out", gen_args.out);
      const ipcw::SimConfig cfg{gen_args.n, gen_args.seed};
      const ipcw::Dataset data = ipcw::generate_sample(cfg);
      const ordered_json meta{{"n", gen_args.n},
                              {"seed", gen_args.seed},
                              {"design", ipcw::CosineDesign{}.name()}};
      emit_csv(gen_args.out, [&](const std::filesystem::path& p) {
        ipcw::write_dataset_csv(p, data, provenance("simulate generate", meta));
      });
      return 0;
    }

    const auto run_study = [&](CLI::App* cmd, SimStudyArgs& args,
                               bool coverage) {
      const ConfigFill fill(cmd, args.config);
      fill("n", args.n);
      fill("seed", args.seed);
      fill("h", args.h);
      fill("reps", args.reps);
      fill("grid", args.grid_steps);
      fill("theta", args.theta);
      fill("region", args.region);
      fill("inflation", args.inflation);
      fill("out-csv", args.out_csv);
      fill("out-json", args.out_json);
      fill("figures", args.figures);

      const ipcw::Region region = parse_region(args.region);
      if (region.dim() != 1) {
        throw ipcw::ConfigError("simulation studies are 1-dimensional");
      }
      const auto& b = region.bounds()[0];
      const std::vector<double> grid = linspace(b[0], b[1], args.grid_steps);
      const ipcw::BandConfig band_cfg(args.theta, region,
                                      ipcw::FixedBandwidth{args.h});
      const ipcw::SimConfig cfg{args.n, args.seed};

      const ipcw::SimReport report =
          coverage ? ipcw::coverage_study(cfg, band_cfg, args.reps, grid,
                                          args.inflation, args.threads)
                   : ipcw::epsilon1_study(cfg, args.h, args.reps, grid,
                                          band_cfg, args.threads);

      const std::string cmd_name =
          coverage ? "simulate coverage" : "simulate epsilon1";
      const ordered_json meta{{"n", args.n},         {"seed", args.seed},
                              {"h", args.h},         {"reps", args.reps},
                              {"theta", args.theta}, {"region", args.region},
                              {"inflation", args.inflation}};
      if (!args.out_csv.empty()) {
        ipcw::write_records_csv(args.out_csv, report,
                                provenance(cmd_name, meta));
      }
      const std::string summary = report.to_json().dump(2) + "\n";
      if (!args.out_json.empty()) {
        write_text(args.out_json, summary);
      } else {
        std::cout << summary;
      }

      if (!args.figures.empty()) {
        // Figure-1 style: replication 0's band against the truth
        const ipcw::SimConfig rep0{args.n,
                                   ipcw::Rng::stream_seed(args.seed, 0)};
        const ipcw::Dataset data0 = ipcw::generate_sample(rep0);
        std::vector<std::vector<double>> grid_pts;
        grid_pts.reserve(grid.size());
        for (const double x : grid) grid_pts.push_back({x});
        const ipcw::CosineDesign design;
        const ipcw::EstimateCurve curve = ipcw::confidence_band(
            data0, design.response_transform(), grid_pts,
            ipcw::KernelSpec::epanechnikov(1), ipcw::GSpec::kaplan_meier(),
            band_cfg, args.threads);
        ipcw::write_band_csv(args.figures + "_band.csv", curve, 1,
                             provenance(cmd_name + " band-figure", meta));
        std::vector<std::pair<double, double>> truth;
        truth.reserve(grid.size());
        for (const double x : grid) {
          truth.emplace_back(x, ipcw::true_regression(x));
        }
        write_band_figure(args.figures + "_band.svg", curve, truth,
                          "band vs truth, n=" + std::to_string(args.n));

        // Figure-2 style: epsilon1 distribution
        std::ofstream qcsv(args.figures + "_epsilon1.csv");
        if (!qcsv) throw ipcw::IoError("cannot open figure CSV");
        qcsv << "# " << provenance(cmd_name + " epsilon1-figure", meta) << "\n";
        qcsv << "quantile,epsilon1\n";
        for (const auto& [k, v] : report.epsilon1_quantiles) {
          qcsv << k << "," << ipcw::format_double(v) << "\n";
        }
        std::vector<double> eps;
        for (const auto& rec : report.records) {
          if (!rec.failed) eps.push_back(rec.epsilon1);
        }
        std::sort(eps.begin(), eps.end());
        if (!eps.empty()) {
          ipcw::SvgSeries s;
          s.label = "epsilon1 empirical quantiles";
          s.color = "#1f5fa8";
          for (std::size_t i = 0; i < eps.size(); ++i) {
            s.x.push_back(eps.size() == 1 ? 0.5
                                          : static_cast<double>(i) /
                                                (eps.size() - 1));
            s.y.push_back(eps[i]);
          }
          ipcw::write_svg_plot(
              args.figures + "_epsilon1.svg", {s},
              "epsilon1 distribution, n=" + std::to_string(args.n) +
                  ", h=" + ipcw::format_double(args.h));
        }
      }
      return 0;
    };

    if (eps_cmd->parsed()) return run_study(eps_cmd, eps_args, false);
    if (cov_cmd->parsed()) return run_study(cov_cmd, cov_args, true);

    return error_exit("config", "no subcommand", 2);
  } catch (const ipcw::ConfigError& e) {
    return error_exit("config", e.what(), 2);
  } catch (const ipcw::IoError& e) {
    return error_exit("io", e.what(), 3);
  } catch (const ipcw::NumericError& e) {
    return error_exit("numeric", e.what(), 4);
  } catch (const std::exception& e) {
    return error_exit("internal", e.what(), 1);
  }
}
