// Command line front end: analytic bounds, simulation, estimation and
// one-command reproduction of the standard figure experiments as CSV tables.
//
// Exit codes: 0 success, 1 usage/config error, 2 model-hypothesis violation
// (non-inhibitory interaction), 3 sampler non-convergence.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "gibbsbounds/gibbsbounds.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gibbsbounds;

namespace {

struct CliOptions {
  std::string config_path;
  std::string out;
  std::string pattern_path;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  bool fast = false;
  int figure = 0;
  std::optional<std::size_t> replicates;
};

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  return json::parse(in);  // parse_error carries line/byte position
}

std::uint64_t config_seed(const json& cfg, const CliOptions& opt) {
  if (opt.seed) return *opt.seed;
  return cfg.value("seed", std::uint64_t{0});
}

void emit(const CliOptions& opt, const std::string& content) {
  if (opt.out.empty()) {
    std::cout << content;
  } else {
    write_file(opt.out, content);
  }
}

SamplerKind sampler_from_string(const std::string& s) {
  if (s == "mh") return SamplerKind::mh;
  if (s == "dcftp") return SamplerKind::dcftp;
  if (s == "poisson") return SamplerKind::poisson;
  throw std::invalid_argument("unknown sampler '" + s + "' (expected mh, dcftp or poisson)");
}

// ---------------------------------------------------------------- bounds ---

int cmd_bounds(const CliOptions& opt) {
  const json cfg = load_config(opt.config_path);
  const PairwiseModel model = model_from_json(cfg.at("model"));
  const std::string statistic = cfg.value("statistic", std::string("intensity"));

  if (statistic == "intensity") {
    const double G = integral_G(model);
    const Interval b = intensity_bounds(model.beta(), G);
    const json out = {{"lower", b.lower},
                      {"lambda_ps", lambda_ps(model.beta(), G)},
                      {"lambda_mf", lambda_mf(model.beta(), integral_Gamma(model))},
                      {"upper", b.upper}};
    emit(opt, out.dump() + "\n");
    return 0;
  }

  const auto grid = t_grid_from_json(cfg.at("t_grid")).make();
  const Interval lam = intensity_bounds(model);
  CurveBand band;
  if (statistic == "F") band = f_bounds(lam, model.c_star(), model.dim(), grid);
  else if (statistic == "G") band = g_bounds(model, lam, grid);
  else if (statistic == "K") band = k_bounds(model, lam, grid);
  else if (statistic == "pcf") band = pcf_bounds(model, lam, grid);
  else throw std::invalid_argument("unknown statistic '" + statistic + "'");
  emit(opt, band_to_csv(band));
  return 0;
}

// -------------------------------------------------------------- simulate ---

int cmd_simulate(const CliOptions& opt) {
  const json cfg = load_config(opt.config_path);
  const PairwiseModel model = model_from_json(cfg.at("model"));
  const Window window = window_from_json(cfg.at("window"));
  const std::string sampler = cfg.value("sampler", std::string("mh"));
  const std::uint64_t steps = cfg.value("steps", std::uint64_t{100000});
  const RngSeed seed{config_seed(cfg, opt), cfg.value("stream", std::uint64_t{0})};

  PointPattern pat = [&] {
    switch (sampler_from_string(sampler)) {
      case SamplerKind::poisson: return sample_poisson(window, model.beta(), seed);
      case SamplerKind::mh: return sample_mh(model, window, steps, seed);
      default: return sample_dcftp(model, window, seed);
    }
  }();

  const fs::path dir = opt.out.empty() ? fs::path(".") : fs::path(opt.out);
  fs::create_directories(dir);
  write_file((dir / "pattern.csv").string(), pattern_to_csv(pat));
  const json sidecar = {{"window", window_to_json(window)},
                        {"model", model_to_json(model)},
                        {"seed", seed.seed},
                        {"stream", seed.stream},
                        {"steps", steps},
                        {"sampler", sampler}};
  write_file((dir / "pattern.json").string(), sidecar.dump(2) + "\n");
  std::cout << "points: " << pat.size() << "\n";
  return 0;
}

// -------------------------------------------------------------- estimate ---

int cmd_estimate(const CliOptions& opt) {
  const json cfg = load_config(opt.config_path);
  if (opt.pattern_path.empty())
    throw std::invalid_argument("estimate requires --pattern <csv file>");
  fs::path sidecar_path = opt.pattern_path;
  sidecar_path.replace_extension(".json");
  const json sidecar = json::parse(read_file(sidecar_path.string()));
  const Window sim_window = window_from_json(sidecar.at("window"));
  const PointPattern pat = pattern_from_csv(read_file(opt.pattern_path), sim_window);

  const Window inner = window_from_json(cfg.at("window"));
  const std::string statistic = cfg.value("statistic", std::string("intensity"));

  if (statistic == "intensity") {
    emit(opt, json{{"estimate", est_intensity(pat, inner)}}.dump() + "\n");
    return 0;
  }
  const auto grid = t_grid_from_json(cfg.at("t_grid")).make();
  std::vector<double> curve;
  if (statistic == "F") curve = est_F(pat, inner, grid);
  else if (statistic == "G") curve = est_G(pat, inner, grid);
  else if (statistic == "K") curve = est_K(pat, inner, grid, est_intensity(pat, inner));
  else throw std::invalid_argument("no estimator for statistic '" + statistic + "'");
  emit(opt, curve_to_csv(grid, curve, {}));
  return 0;
}

// ------------------------------------------------------------- reproduce ---

// gamma sweep table: bounds, both approximations and replicate estimates
std::string intensity_sweep_csv(double beta, double r, std::size_t n, std::uint64_t mh_steps,
                                SamplerKind sampler, RngSeed base, unsigned threads) {
  std::string csv = "gamma,lower,lambda_ps,lambda_mf,upper,estimate,std_err\n";
  const Window inner({0.0, 0.0}, {1.0, 1.0});
  for (int gi = 0; gi <= 10; ++gi) {
    const double gamma = gi / 10.0;
    const PairwiseModel model(2, beta, RadialStepInteraction::strauss(gamma, r));
    const double G = integral_G(model);
    const Interval b = intensity_bounds(beta, G);
    const Window sim = inner.dilated(model.range());
    auto stat = [&](const PointPattern& pat) {
      return std::vector<double>{est_intensity(pat, inner)};
    };
    const auto summary = run_replicates(model, sim, sampler, mh_steps, n, stat,
                                        {base.seed, base.stream + 1000 * gi}, threads);
    csv += format_double(gamma) + ',' + format_double(b.lower) + ',' +
           format_double(lambda_ps(beta, G)) + ',' +
           format_double(lambda_mf(beta, integral_Gamma(model))) + ',' +
           format_double(b.upper) + ',' + format_double(summary.mean[0]) + ',' +
           format_double(summary.std_err[0]) + '\n';
  }
  return csv;
}

int reproduce_intensity_figure(const CliOptions& opt, double beta, const fs::path& dir) {
  const std::size_t n = opt.replicates.value_or(opt.fast ? 500 : 10000);
  const SamplerKind sampler = opt.fast ? SamplerKind::mh : SamplerKind::dcftp;
  const std::uint64_t seed = opt.seed.value_or(1);
  write_file((dir / "bounds_and_estimates.csv").string(),
             intensity_sweep_csv(beta, 0.05, n, 100000, sampler, {seed, 0}, opt.threads));
  return 0;
}

int reproduce_pattern_figure(const CliOptions& opt, const fs::path& dir) {
  // hard annulus vs hard core with the same beta and G, long birth-death runs
  const std::uint64_t seed = opt.seed.value_or(1);
  const std::size_t n_runs = opt.replicates.value_or(opt.fast ? 10 : 300);
  const std::uint64_t steps = 10000000;
  const Window inner({0.0, 0.0}, {1.0, 1.0});

  std::string summary = "model,points_unit_square,mean_count,std_err,lower,lambda_ps,lambda_mf,upper\n";
  const PairwiseModel annulus(2, 3000.0,
                              RadialStepInteraction::hard_annulus(0.05, std::sqrt(2.0) * 0.05));
  const PairwiseModel hardcore(2, 3000.0, RadialStepInteraction::hard_core(0.05));
  const char* names[2] = {"hard_annulus", "hard_core"};
  const PairwiseModel* models[2] = {&annulus, &hardcore};
  for (int m = 0; m < 2; ++m) {
    const PairwiseModel& model = *models[m];
    const Window sim = inner.dilated(model.range());
    const auto patterns =
        run_pattern_replicates(model, sim, SamplerKind::mh, steps, n_runs,
                               {seed, static_cast<std::uint64_t>(m) * 100000}, opt.threads);
    ReplicateSummary reps;
    reps.n_replicates = patterns.size();
    for (const auto& pat : patterns) reps.values.push_back({est_intensity(pat, inner)});
    summarize(reps);
    // display pattern: the first run, restricted to the unit square
    PointPattern display(inner);
    for (std::size_t i = 0; i < patterns[0].size(); ++i)
      if (inner.contains(patterns[0].point(i))) display.add(patterns[0].point(i));
    write_file((dir / (std::string(names[m]) + "_pattern.csv")).string(),
               pattern_to_csv(display));
    const double G = integral_G(model);
    const Interval b = intensity_bounds(model.beta(), G);
    summary += std::string(names[m]) + ',' + std::to_string(display.size()) + ',' +
               format_double(reps.mean[0]) + ',' + format_double(reps.std_err[0]) + ',' +
               format_double(b.lower) + ',' + format_double(lambda_ps(model.beta(), G)) + ',' +
               format_double(lambda_mf(model.beta(), integral_Gamma(model))) + ',' +
               format_double(b.upper) + '\n';
  }
  write_file((dir / "summary.csv").string(), summary);
  return 0;
}

// band + replicate estimates for one summary statistic of one model
CurveBand band_with_estimates(const PairwiseModel& model, const Window& inner,
                              const std::vector<double>& grid, const std::string& statistic,
                              std::size_t n, std::uint64_t mh_steps, RngSeed base,
                              unsigned threads) {
  const double buffer = std::max(model.range(), grid.back());
  const Window sim = inner.dilated(buffer);
  const Interval lam = intensity_bounds(model);

  CurveBand band;
  if (statistic == "G") band = g_bounds(model, lam, grid);
  else if (statistic == "F") band = f_bounds(lam, model.c_star(), model.dim(), grid);
  else band = k_bounds(model, lam, grid);

  const auto patterns =
      run_pattern_replicates(model, sim, SamplerKind::mh, mh_steps, n, base, threads);

  double lam_hat = 0.0;
  if (statistic == "K") {
    for (const auto& pat : patterns) lam_hat += est_intensity(pat, inner);
    lam_hat /= static_cast<double>(patterns.size());
  }
  ReplicateSummary summary;
  summary.n_replicates = patterns.size();
  summary.values.reserve(patterns.size());
  for (const auto& pat : patterns) {
    if (statistic == "G") summary.values.push_back(est_G(pat, inner, grid));
    else if (statistic == "F") summary.values.push_back(est_F(pat, inner, grid));
    else summary.values.push_back(est_K(pat, inner, grid, lam_hat));
  }
  summarize(summary);
  band.estimate = summary.mean;
  band.std_err = summary.std_err;
  return band;
}

int reproduce_summary_figure(const CliOptions& opt, const fs::path& dir) {
  const std::uint64_t seed = opt.seed.value_or(1);
  const std::size_t n = opt.replicates.value_or(opt.fast ? 200 : 1000);
  const Window inner({0.0, 0.0}, {1.0, 1.0});

  const PairwiseModel annulus(2, 70.0, RadialStepInteraction::hard_annulus(0.025, 0.035));
  write_file((dir / "g_hard_annulus.csv").string(),
             band_to_csv(band_with_estimates(annulus, inner, linspace(0.0, 0.06, 25), "G", n,
                                             100000, {seed, 0}, opt.threads)));

  const PairwiseModel hardcore(2, 40.0, RadialStepInteraction::hard_core(0.05));
  write_file((dir / "k_strauss_hardcore.csv").string(),
             band_to_csv(band_with_estimates(hardcore, inner, linspace(0.0, 0.1, 21), "K", n,
                                             100000, {seed, 50000}, opt.threads)));
  return 0;
}

int cmd_reproduce(const CliOptions& opt) {
  const fs::path base = opt.out.empty() ? fs::path(".") : fs::path(opt.out);
  const fs::path dir = base / ("fig" + std::to_string(opt.figure));
  fs::create_directories(dir);
  switch (opt.figure) {
    case 1: return reproduce_intensity_figure(opt, 50.0, dir);
    case 2: return reproduce_intensity_figure(opt, 100.0, dir);
    case 3: return reproduce_pattern_figure(opt, dir);
    case 4: return reproduce_summary_figure(opt, dir);
    default: throw std::invalid_argument("figure must be 1, 2, 3 or 4");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "rigorous intensity / pgfl / F / G / K bounds for inhibitory pairwise interaction "
      "point processes, with simulation-based validation"};
  app.require_subcommand(1);

  CliOptions opt;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", opt.config_path, "experiment config (JSON)");
    if (needs_config) c->required();
    sub->add_option("--seed", opt.seed, "override the RNG seed");
    sub->add_option("--out", opt.out, "output file or directory");
    sub->add_option("--threads", opt.threads,
                    "worker threads (wall time only, never affects results)");
  };

  auto* bounds_cmd = app.add_subcommand("bounds", "analytic bounds for a model");
  add_common(bounds_cmd, true);

  auto* simulate_cmd = app.add_subcommand("simulate", "draw one pattern and write CSV + sidecar");
  add_common(simulate_cmd, true);

  auto* estimate_cmd = app.add_subcommand("estimate", "summary statistics of a stored pattern");
  add_common(estimate_cmd, true);
  estimate_cmd->add_option("--pattern", opt.pattern_path, "pattern CSV (sidecar JSON alongside)")
      ->required();

  auto* reproduce_cmd =
      app.add_subcommand("reproduce", "regenerate a figure experiment as CSV tables");
  add_common(reproduce_cmd, false);
  reproduce_cmd->add_option("--figure", opt.figure, "figure number (1-4)")->required();
  reproduce_cmd->add_flag("--fast", opt.fast, "reduced replicate budgets (larger standard errors)");
  reproduce_cmd->add_option("--replicates", opt.replicates,
                            "override the replicate count (desk-scale checks)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (bounds_cmd->parsed()) return cmd_bounds(opt);
    if (simulate_cmd->parsed()) return cmd_simulate(opt);
    if (estimate_cmd->parsed()) return cmd_estimate(opt);
    return cmd_reproduce(opt);
  } catch (const HypothesisViolation& e) {
    std::cerr << "error: inhibitory hypothesis violated (phi <= 1 required): " << e.what()
              << "\n";
    return 2;
  } catch (const NonConvergenceError& e) {
    std::cerr << "error: perfect simulation did not coalesce: " << e.what()
              << " (events=" << e.events_used << ", horizon=" << e.time_horizon
              << ", funnel gap=" << e.funnel_gap << ")\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
