// Batch front end: experiment dispatch with JSON config, CSV/JSON artifacts.
// Exit codes: 0 pass, 1 failed acceptance comparison, 2 runtime error.
#include <omp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wavipm/circle_potential.hpp"
#include "wavipm/coefficients.hpp"
#include "wavipm/estimator.hpp"
#include "wavipm/experiments.hpp"
#include "wavipm/measure.hpp"
#include "wavipm/numeric.hpp"
#include "wavipm/wavelet.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace wavipm;

namespace {

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_atomic(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, path);
}

void emit(const fs::path& out_dir, const std::string& name, const json& j) {
  write_atomic(out_dir / name, j.dump(2) + "\n");
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config parse error: ") + e.what());
  }
}

// Applies config values beneath any flag given on the command line; rejects
// keys that do not name an option of the subcommand.
void merge_config(CLI::App* cmd, const json& cfg) {
  for (const auto& [key, value] : cfg.items()) {
    CLI::Option* opt = nullptr;
    try {
      opt = cmd->get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      throw ValidationError("unknown config key \"" + key + "\"");
    }
    if (opt->count() > 0) continue;  // flags override JSON
    if (value.is_array()) {
      for (const auto& v : value)
        opt->add_result(v.is_string() ? v.get<std::string>() : v.dump());
    } else {
      opt->add_result(value.is_string() ? value.get<std::string>()
                                        : value.dump());
    }
    opt->run_callback();
  }
}

void require(bool ok, const std::string& constraint) {
  if (!ok) throw ValidationError("validation error: " + constraint);
}

std::string csv_field_row(const std::vector<std::string>& cells) {
  std::string row;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) row += ',';
    row += cells[i];
  }
  row += '\n';
  return row;
}

int finish(const fs::path& out_dir, const json& summary) {
  emit(out_dir, "summary.json", summary);
  std::cout << summary.dump(2) << "\n";
  return summary.at("pass").get<bool>() ? 0 : 1;
}

// ---------------------------------------------------------------------------

struct WaveletCheckOpts {
  int order = 4;
  int depth = 12;
};

int run_wavelet_check(const WaveletCheckOpts& o, const fs::path& out_dir) {
  require(o.order >= 1, "order must be >= 1");
  require(o.depth >= 4, "depth must be >= 4");
  auto fam = WaveletFamily::build(o.order, o.depth);
  const auto& h = fam.low_pass();

  CompensatedSum sum, sumsq;
  for (double c : h) {
    sum.add(c);
    sumsq.add(c * c);
  }
  double filter_err =
      std::max(std::abs(sum.value() - std::sqrt(2.0)), std::abs(sumsq.value() - 1.0));
  for (size_t k = 1; 2 * k < h.size(); ++k) {
    CompensatedSum dot;
    for (size_t m = 2 * k; m < h.size(); ++m) dot.add(h[m] * h[m - 2 * k]);
    filter_err = std::max(filter_err, std::abs(dot.value()));
  }

  double pou_err = 0;
  for (int i = 0; i <= 64; ++i) {
    double x = fam.support_length() * i / 64.0;
    double acc = 0;
    for (int k = -2 * o.order; k <= 2 * o.order; ++k) acc += fam.scaling(x - k);
    pou_err = std::max(pou_err, std::abs(acc - 1.0));
  }

  double two_scale_err = 0;
  for (int i = 0; i <= 256; ++i) {
    double x = fam.support_length() * i / 256.0;
    double acc = 0;
    for (size_t k = 0; k < h.size(); ++k)
      acc += std::sqrt(2.0) * h[k] * fam.scaling(2 * x - (double)k);
    two_scale_err = std::max(two_scale_err, std::abs(acc - fam.scaling(x)));
  }

  bool pass = filter_err <= 1e-12 &&
              pou_err <= 4.0 * std::exp2(-o.depth) && two_scale_err <= 1e-10;
  json summary = {
      {"config", {{"command", "wavelet-check"}, {"order", o.order}, {"depth", o.depth}}},
      {"results",
       {{"filter_error", filter_err},
        {"partition_of_unity_error", pou_err},
        {"two_scale_error", two_scale_err}}},
      {"pass", pass}};
  return finish(out_dir, summary);
}

// ---------------------------------------------------------------------------

struct IpmOpts {
  std::string family = "perturbed-circle";
  double beta = 0.0;
  double index = 8.0;  // frequency n or radius offset eps
  double gamma = 1.0;
  int max_level = 10;
  int nodes = 512;
};

int run_ipm(const IpmOpts& o, const fs::path& out_dir) {
  require(o.family == "perturbed-circle" || o.family == "circle-radius",
          "family must be perturbed-circle or circle-radius");
  require(o.gamma > 0, "gamma must be > 0");
  require(o.max_level >= 0, "J must be >= 0");

  DiscreteMeasure a, b;
  if (o.family == "perturbed-circle") {
    require(o.index >= 1 && o.index == std::floor(o.index),
            "n must be a positive integer");
    a = quadrature_measure(make_perturbed_circle(o.beta, (int)o.index), o.nodes);
    b = project_to_circle(a);
  } else {
    a = quadrature_measure(make_circle(0.0), o.nodes);
    b = quadrature_measure(make_circle(o.index), o.nodes);
  }
  int order = (int)std::ceil(o.gamma) + 3;
  auto fam = WaveletFamily::build(order, 12);
  auto fa = analyze_measure(a, fam, o.max_level);
  auto fb = analyze_measure(b, fam, o.max_level);
  write_atomic(out_dir / "field_a.csv", fa.to_csv());
  write_atomic(out_dir / "field_b.csv", fb.to_csv());
  double d = ipm_dual(fa, fb, o.gamma);

  json summary = {{"config",
                   {{"command", "ipm"},
                    {"family", o.family},
                    {"beta", o.beta},
                    {"index", o.index},
                    {"gamma", o.gamma},
                    {"J", o.max_level},
                    {"nodes", o.nodes},
                    {"wavelet_order", order}}},
                  {"results", {{"ipm", d}}},
                  {"pass", true}};
  return finish(out_dir, summary);
}

// ---------------------------------------------------------------------------

struct FitOpts {
  std::string family = "perturbed-circle";
  double beta = 0.0;
  double gamma = 1.0;
  double eta = 2.0;
  std::vector<double> n;
  std::vector<double> eps;
  int max_level = 10;
  int nodes = 512;
  double log_c = 0.0;
  double slope_tol = 0.15;
  double r2_min = 0.0;
};

int run_fit(const FitOpts& o, const fs::path& out_dir) {
  require(o.family == "perturbed-circle" || o.family == "circle-radius",
          "family must be perturbed-circle or circle-radius");
  require(o.gamma > 0 && o.eta > 0, "gamma and eta must be > 0");
  require(o.gamma <= o.eta, "gamma <= eta violated");
  require(o.n.empty() || o.eps.empty(), "give --n or --eps, not both");

  ExperimentSpec spec;
  spec.family = o.family == "perturbed-circle"
                    ? ExperimentSpec::Family::perturbed_circle
                    : ExperimentSpec::Family::circle_radius;
  spec.beta = o.beta;
  spec.indices = o.n.empty() ? o.eps : o.n;
  require(spec.indices.size() >= 3, "need at least 3 family indices");
  spec.pairs = {{o.gamma, o.eta}};
  spec.max_level = o.max_level;
  spec.nodes = o.nodes;
  spec.integer_log_c = o.log_c;
  spec.validate();

  auto rows = run_family(spec);
  auto fit = fit_exponent(rows);
  double predicted = predicted_delta(o.beta, o.gamma, o.eta);
  bool pass = std::abs(fit.slope - predicted) <= o.slope_tol &&
              fit.r_squared >= o.r2_min;

  std::string csv = "index,gamma,eta,d_gamma,d_eta\n";
  for (const auto& r : rows)
    csv += csv_field_row({format_double(r.index), format_double(r.gamma),
                          format_double(r.eta), format_double(r.d_gamma),
                          format_double(r.d_eta)});
  write_atomic(out_dir / "rows.csv", csv);

  json summary = {{"config",
                   {{"command", "fit-exponent"},
                    {"family", o.family},
                    {"beta", o.beta},
                    {"gamma", o.gamma},
                    {"eta", o.eta},
                    {"indices", spec.indices},
                    {"J", o.max_level},
                    {"nodes", o.nodes},
                    {"log_c", o.log_c},
                    {"slope_tol", o.slope_tol},
                    {"r2_min", o.r2_min}}},
                  {"results",
                   {{"slope", fit.slope},
                    {"intercept", fit.intercept},
                    {"r_squared", fit.r_squared},
                    {"predicted", predicted}}},
                  {"pass", pass}};
  return finish(out_dir, summary);
}

// ---------------------------------------------------------------------------

struct Example5Opts {
  double beta = 0.0;
  int eta = 2;
  std::vector<int> n{4, 8, 16, 32};
  int nodes = 1024;
  int max_level = 10;
};

int run_example5(const Example5Opts& o, const fs::path& out_dir) {
  require(o.eta >= 1, "eta must be >= 1");
  require(o.n.size() >= 3, "need at least 3 frequencies");
  auto rep = example_report(o.beta, o.eta, o.n, o.nodes, o.max_level);

  bool pass = true;
  json rows = json::array();
  for (const auto& r : rep.rows) {
    pass = pass && r.ratio >= 0.1 && r.ratio <= 10.0;
    rows.push_back({{"n", r.n},
                    {"displacement", r.displacement},
                    {"pairing", r.pairing},
                    {"cost", r.cost},
                    {"d_one", r.d_one},
                    {"d_eta", r.d_eta},
                    {"d_half", r.d_half},
                    {"ratio", r.ratio}});
  }
  json report = {{"config",
                  {{"command", "example5"},
                   {"beta", o.beta},
                   {"eta", o.eta},
                   {"n", o.n},
                   {"nodes", o.nodes},
                   {"J", o.max_level}}},
                 {"results",
                  {{"rows", rows},
                   {"slope_displacement", rep.slope_displacement},
                   {"slope_pairing", rep.slope_pairing},
                   {"slope_cost", rep.slope_cost},
                   {"slope_d_one", rep.slope_d_one},
                   {"slope_d_eta", rep.slope_d_eta},
                   {"slope_d_half", rep.slope_d_half}}},
                 {"pass", pass}};
  emit(out_dir, "report.json", report);
  return finish(out_dir, report);
}

// ---------------------------------------------------------------------------

struct GridOpts {
  double spacing = 0.0004;
  int grid_count = 3;  // candidates at k*spacing, k = -grid_count..grid_count
  double truth_eps = 0.0;
  int nodes = 256;
  int max_level = 6;
  double gamma_loss = 0.5;
};

ModelFamily build_grid(const GridOpts& g) {
  require(g.spacing > 0, "grid spacing must be > 0");
  require(g.grid_count >= 0, "grid count must be >= 0");
  std::vector<ParametricCurve> curves;
  for (int k = -g.grid_count; k <= g.grid_count; ++k)
    curves.push_back(make_circle(g.spacing * k));
  return make_model_family(std::move(curves), g.nodes, g.gamma_loss);
}

struct EstimateOpts {
  GridOpts grid;
  int sample_n = 0;  // 0: noiseless quadrature sample of the truth
  uint64_t seed = 1;
};

int run_estimate(const EstimateOpts& o, const fs::path& out_dir) {
  auto family = build_grid(o.grid);
  auto fam = WaveletFamily::build(4, 12);
  auto truth = make_circle(o.grid.truth_eps);
  DiscreteMeasure sample =
      o.sample_n > 0 ? sample_iid(truth, o.sample_n, o.seed)
                     : quadrature_measure(truth, o.grid.nodes);
  auto res = minimum_ipm_estimate(sample, family, fam, o.grid.max_level);

  json summary = {{"config",
                   {{"command", "estimate"},
                    {"spacing", o.grid.spacing},
                    {"grid_count", o.grid.grid_count},
                    {"truth_eps", o.grid.truth_eps},
                    {"sample_n", o.sample_n},
                    {"seed", o.seed},
                    {"nodes", o.grid.nodes},
                    {"J", o.grid.max_level},
                    {"gamma_loss", o.grid.gamma_loss}}},
                  {"results",
                   {{"chosen", res.chosen},
                    {"chosen_eps", family.curves[res.chosen].eps},
                    {"ipm", res.ipm},
                    {"scores", res.scores}}},
                  {"pass", true}};
  return finish(out_dir, summary);
}

struct RateOpts {
  GridOpts grid;
  std::vector<int> n{100, 400, 1600};
  int reps = 10;
  uint64_t seed = 20260826;
  double gamma_eval = 1.0;
};

int run_rate(const RateOpts& o, const fs::path& out_dir) {
  require(o.reps >= 3, "reps must be >= 3");
  require(!o.n.empty(), "n list must be nonempty");
  require(std::is_sorted(o.n.begin(), o.n.end()), "n list must be ascending");
  auto family = build_grid(o.grid);
  auto fam = WaveletFamily::build(4, 12);
  auto truth = make_circle(o.grid.truth_eps);
  auto res = rate_experiment(truth, family, fam, o.n, o.reps, o.seed,
                             o.gamma_eval, o.grid.max_level);

  std::string csv = "n,rep,chosen_index,ipm_loss,ipm_eval\n";
  for (const auto& d : res.details)
    csv += csv_field_row({std::to_string(d.n), std::to_string(d.rep),
                          std::to_string(d.chosen), format_double(d.ipm_loss),
                          format_double(d.ipm_eval)});
  write_atomic(out_dir / "details.csv", csv);

  json rows = json::array();
  for (const auto& r : res.rows)
    rows.push_back(
        {{"n", r.n}, {"mean_error", r.mean_error}, {"sd", r.sd}});
  json summary = {{"config",
                   {{"command", "rate"},
                    {"spacing", o.grid.spacing},
                    {"grid_count", o.grid.grid_count},
                    {"truth_eps", o.grid.truth_eps},
                    {"n", o.n},
                    {"reps", o.reps},
                    {"seed", o.seed},
                    {"gamma_eval", o.gamma_eval},
                    {"nodes", o.grid.nodes},
                    {"J", o.grid.max_level},
                    {"gamma_loss", o.grid.gamma_loss}}},
                  {"results", {{"rows", rows}}},
                  {"pass", true}};
  return finish(out_dir, summary);
}

void add_grid_options(CLI::App* cmd, GridOpts& g) {
  cmd->add_option("--spacing", g.spacing, "candidate radius-grid spacing");
  cmd->add_option("--grid-count", g.grid_count,
                  "candidates at k*spacing, k in [-count, count]");
  cmd->add_option("--truth-eps", g.truth_eps, "radius offset of the truth");
  cmd->add_option("--nodes", g.nodes, "quadrature nodes per candidate");
  cmd->add_option("--J", g.max_level, "maximum wavelet level");
  cmd->add_option("--gamma-loss", g.gamma_loss, "loss smoothness");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Besov-IPM experiment runner"};
  app.require_subcommand(1);

  int workers = 0;
  std::string out_dir = "out";
  std::string config_path;
  app.add_option("--workers", workers, "worker threads (0: default)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--config", config_path, "JSON config; flags override");

  WaveletCheckOpts wc;
  auto* cmd_wc = app.add_subcommand("wavelet-check", "filter/table invariants");
  cmd_wc->add_option("--order", wc.order, "Daubechies order");
  cmd_wc->add_option("--depth", wc.depth, "cascade depth");

  IpmOpts ip;
  auto* cmd_ipm = app.add_subcommand("ipm", "dual-norm distance of one pair");
  cmd_ipm->add_option("--family", ip.family, "perturbed-circle|circle-radius");
  cmd_ipm->add_option("--beta", ip.beta, "oscillation decay exponent");
  cmd_ipm->add_option("--index", ip.index, "frequency n or radius offset");
  cmd_ipm->add_option("--gamma", ip.gamma, "smoothness of the dual norm");
  cmd_ipm->add_option("--J", ip.max_level, "maximum wavelet level");
  cmd_ipm->add_option("--nodes", ip.nodes, "quadrature nodes");

  FitOpts ft;
  auto* cmd_fit = app.add_subcommand("fit-exponent", "interpolation slope fit");
  cmd_fit->add_option("--family", ft.family, "perturbed-circle|circle-radius");
  cmd_fit->add_option("--beta", ft.beta, "oscillation decay exponent");
  cmd_fit->add_option("--gamma", ft.gamma, "low smoothness");
  cmd_fit->add_option("--eta", ft.eta, "high smoothness");
  cmd_fit->add_option("--n", ft.n, "frequencies")->delimiter(',');
  cmd_fit->add_option("--eps", ft.eps, "radius offsets")->delimiter(',');
  cmd_fit->add_option("--J", ft.max_level, "maximum wavelet level");
  cmd_fit->add_option("--nodes", ft.nodes, "quadrature nodes");
  cmd_fit->add_option("--log-c", ft.log_c, "(1+j)^-c damping at integer smoothness");
  cmd_fit->add_option("--slope-tol", ft.slope_tol, "pass tolerance on the slope");
  cmd_fit->add_option("--r2-min", ft.r2_min, "pass threshold on r^2");

  Example5Opts ex;
  auto* cmd_ex = app.add_subcommand("example5", "oscillating-circle report");
  cmd_ex->add_option("--beta", ex.beta, "oscillation decay exponent");
  cmd_ex->add_option("--eta", ex.eta, "potential smoothness (integer)");
  cmd_ex->add_option("--n", ex.n, "frequencies")->delimiter(',');
  cmd_ex->add_option("--nodes", ex.nodes, "quadrature nodes");
  cmd_ex->add_option("--J", ex.max_level, "maximum wavelet level");

  EstimateOpts es;
  auto* cmd_est = app.add_subcommand("estimate", "single minimum-IPM fit");
  add_grid_options(cmd_est, es.grid);
  cmd_est->add_option("--sample-n", es.sample_n, "i.i.d. sample size (0: quadrature)");
  cmd_est->add_option("--seed", es.seed, "RNG seed");

  RateOpts ra;
  auto* cmd_rate = app.add_subcommand("rate", "estimator convergence experiment");
  add_grid_options(cmd_rate, ra.grid);
  cmd_rate->add_option("--n", ra.n, "sample sizes")->delimiter(',');
  cmd_rate->add_option("--reps", ra.reps, "repetitions per sample size");
  cmd_rate->add_option("--seed", ra.seed, "RNG seed");
  cmd_rate->add_option("--gamma-eval", ra.gamma_eval, "evaluation smoothness");

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      int rc = app.exit(e);
      return rc == 0 ? 0 : 2;
    }

    if (!config_path.empty()) {
      CLI::App* active = app.get_subcommands().front();
      merge_config(active, load_config(config_path));
    }
    if (workers > 0) omp_set_num_threads(workers);

    const fs::path out = out_dir;
    if (cmd_wc->parsed()) return run_wavelet_check(wc, out);
    if (cmd_ipm->parsed()) return run_ipm(ip, out);
    if (cmd_fit->parsed()) return run_fit(ft, out);
    if (cmd_ex->parsed()) return run_example5(ex, out);
    if (cmd_est->parsed()) return run_estimate(es, out);
    if (cmd_rate->parsed()) return run_rate(ra, out);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
