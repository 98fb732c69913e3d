// brmst: Bayesian restricted mean survival time from parametric survival models.
//
// Subcommands: fit, simulate, rmst, waic. Each prints a text table and, with
// --output, writes one JSON document holding the resolved configuration and
// every reported number. Exit status is 2 for usage or validation errors and
// 1 for failures while running.

#include <cstdint>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "brmst/csv.hpp"
#include "brmst/rmst.hpp"
#include "brmst/sampler.hpp"
#include "brmst/simulation.hpp"
#include "brmst/summaries.hpp"
#include "brmst/waic.hpp"
#include "report.hpp"

namespace {

using report::Json;

const std::vector<std::string> kFamilies{"exponential", "weibull", "loglogistic", "lognormal"};
const std::vector<std::string> kEffects{"none", "random", "frailty"};

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SamplerFlags {
  int chains = 2;
  int iterations = 2000;
  int burnin = 1000;
  std::uint64_t seed = 1;

  void add(CLI::App& app) {
    app.add_option("--chains", chains, "Number of chains")->capture_default_str();
    app.add_option("--iter", iterations, "Iterations per chain, burn-in included")->capture_default_str();
    app.add_option("--burnin", burnin, "Burn-in iterations per chain")->capture_default_str();
    app.add_option("--seed", seed, "Random seed")->capture_default_str();
  }

  brmst::SamplerConfig config() const {
    brmst::SamplerConfig cfg;
    cfg.chains = chains;
    cfg.iterations = iterations;
    cfg.burnin = burnin;
    cfg.seed = seed;
    cfg.validate();
    return cfg;
  }

  Json json() const { return {{"chains", chains}, {"iter", iterations}, {"burnin", burnin}, {"seed", seed}}; }
};

struct DataFlags {
  std::string input;
  brmst::CsvSchema schema;
  std::string na = "error";

  void add(CLI::App& app) {
    app.add_option("--input", input, "CSV file with a header row")->required();
    app.add_option("--time-col", schema.time_column, "Follow-up time column")->capture_default_str();
    app.add_option("--event-col", schema.event_column, "Event indicator column (1 event, 0 censored)")
        ->capture_default_str();
    app.add_option("--group-col", schema.group_column, "0/1 group column")->capture_default_str();
    app.add_option("--cluster-col", schema.cluster_column, "Cluster column; empty for a single cluster")
        ->capture_default_str();
    app.add_option("--covariate", schema.covariates, "Extra covariate column (repeatable)");
    app.add_option("--categorical", schema.categorical, "Covariate to one-hot encode (repeatable)");
    app.add_option("--na", na, "Missing value policy")->check(CLI::IsMember({"error", "drop"}))->capture_default_str();
  }

  brmst::SurvivalDataset load() {
    schema.na_policy = brmst::parse_na_policy(na);
    return brmst::ingest_csv(input, schema);
  }

  Json json() const {
    return {{"input", input},
            {"time_col", schema.time_column},
            {"event_col", schema.event_column},
            {"group_col", schema.group_column},
            {"cluster_col", schema.cluster_column},
            {"covariates", schema.covariates},
            {"categorical", schema.categorical},
            {"na", na}};
  }
};

Json data_json(const brmst::SurvivalDataset& data) {
  return {{"rows", data.rows()},
          {"events", data.event.sum()},
          {"clusters", data.cluster_labels},
          {"design_columns", data.covariate_names}};
}

void finish(const Json& doc, const std::string& output) {
  if (!output.empty()) report::write_atomically(doc, output);
}

// ---------------------------------------------------------------- fit

struct FitCommand {
  DataFlags data_flags;
  SamplerFlags sampler;
  std::string family = "exponential";
  std::string effect = "none";
  double tau = 100.0;
  double level = 0.95;
  std::vector<double> thresholds;
  int bins = 30;
  bool exact_lognormal_frailty = false;
  std::string output;

  void add(CLI::App& app) {
    data_flags.add(app);
    sampler.add(app);
    app.add_option("--family", family, "Survival family")->check(CLI::IsMember(kFamilies))->capture_default_str();
    app.add_option("--effect", effect, "Cluster effect")->check(CLI::IsMember(kEffects))->capture_default_str();
    app.add_option("--tau", tau, "RMST horizon")->capture_default_str();
    app.add_option("--ci-level", level, "Credible interval level")->capture_default_str();
    app.add_option("--threshold", thresholds, "Report P(RMST difference < value) (repeatable)");
    app.add_option("--bins", bins, "Histogram bins for the RMST difference")->capture_default_str();
    app.add_flag("--exact-lognormal-frailty", exact_lognormal_frailty,
                 "Integrate S(t)^v numerically instead of the log-normal frailty approximation");
    app.add_option("--output", output, "JSON output path");
  }

  int run() {
    if (!(tau > 0.0)) throw UsageError("--tau must be positive");
    if (!(level > 0.0 && level < 1.0)) throw UsageError("--ci-level must lie in (0, 1)");
    if (bins < 1) throw UsageError("--bins must be positive");
    const brmst::SamplerConfig cfg = sampler.config();
    const brmst::SurvivalDataset data = data_flags.load();
    const brmst::ModelSpec spec{brmst::parse_family(family), brmst::parse_effect(effect), {}};
    const brmst::PosteriorDraws draws = brmst::run_chains(data, spec, cfg);

    const auto params = report::parameter_rows(draws, level);
    brmst::RmstQuery query;
    query.tau = tau;
    query.options.exact_lognormal_frailty = exact_lognormal_frailty;
    const auto dist = brmst::rmst_distribution(draws, query);
    const auto g0 = brmst::summarize(dist.group0.values, level, thresholds);
    const auto g1 = brmst::summarize(dist.group1.values, level, thresholds);
    const auto diff = brmst::summarize(dist.difference.values, level, thresholds);
    const auto hist = brmst::histogram_bins(dist.difference.values, bins);

    std::vector<brmst::ForestRow> forest;
    if (draws.layout.has_effects()) {
      std::vector<brmst::RmstSummary> per_cluster;
      for (Eigen::Index c = 0; c < data.clusters(); ++c) {
        brmst::RmstQuery cq = query;
        cq.cluster = c;
        per_cluster.push_back(brmst::summarize(brmst::rmst_distribution(draws, cq).difference.values, level));
      }
      forest = brmst::forest_rows(data.cluster_labels, per_cluster, diff);
    }

    std::cout << "model: " << family << " / " << effect << ", " << data.rows() << " rows, " << data.clusters()
              << " clusters, " << cfg.chains << " chains x " << cfg.iterations - cfg.burnin << " kept draws\n\n";
    report::print_parameter_table(std::cout, params);
    std::cout << '\n';
    report::print_rmst_table(std::cout, {{"group 0", g0}, {"group 1", g1}, {"difference", diff}});
    report::print_exceedance(std::cout, diff);
    if (!forest.empty()) {
      std::cout << '\n';
      report::print_forest(std::cout, forest);
    }

    Json doc;
    doc["command"] = "fit";
    Json config = data_flags.json();
    config["family"] = family;
    config["effect"] = effect;
    config["tau"] = tau;
    config["ci_level"] = level;
    config["thresholds"] = thresholds;
    config["bins"] = bins;
    config["exact_lognormal_frailty"] = exact_lognormal_frailty;
    config["sampler"] = sampler.json();
    doc["config"] = config;
    doc["data"] = data_json(data);
    doc["draws"] = {{"chains", draws.chain_count()}, {"kept_per_chain", draws.kept()}, {"columns", draws.columns}};
    Json prows = Json::array();
    for (const auto& p : params) prows.push_back(report::to_json(p));
    doc["parameters"] = prows;
    Json acceptance = Json::array();
    for (const auto& chain : draws.acceptance) {
      Json rates;
      for (std::size_t b = 0; b < draws.blocks.size(); ++b) rates[draws.blocks[b]] = chain(static_cast<Eigen::Index>(b));
      acceptance.push_back(rates);
    }
    doc["acceptance"] = acceptance;
    doc["rmst"] = {{"group0", report::to_json(g0)}, {"group1", report::to_json(g1)}, {"difference", report::to_json(diff)}};
    doc["histogram"] = report::to_json(hist);
    Json frows = Json::array();
    for (const auto& r : forest) frows.push_back(report::to_json(r));
    doc["forest"] = frows;
    finish(doc, output);
    return 0;
  }
};

// ---------------------------------------------------------------- simulate

struct SimulateCommand {
  SamplerFlags sampler;
  std::string scenario = "C";
  int n = 512;
  int replications = 10;
  std::optional<std::string> family;
  std::string effect = "none";
  double level = 0.95;
  unsigned threads = 0;
  std::string export_csv;
  int replicate = 0;
  std::string output;

  void add(CLI::App& app) {
    sampler.add(app);
    app.add_option("--scenario", scenario, "Data-generating scenario")
        ->check(CLI::IsMember({"A", "B", "C", "a", "b", "c"}))
        ->capture_default_str();
    app.add_option("--n", n, "Subjects per dataset (multiple of 8)")->capture_default_str();
    app.add_option("--replications", replications, "Number of simulated datasets")->capture_default_str();
    app.add_option("--family", family, "Fitted family (default: the generating family)")
        ->check(CLI::IsMember(kFamilies));
    app.add_option("--effect", effect, "Fitted cluster effect")->check(CLI::IsMember(kEffects))->capture_default_str();
    app.add_option("--ci-level", level, "Credible interval level")->capture_default_str();
    app.add_option("--threads", threads, "Worker threads (0: all cores)")->capture_default_str();
    app.add_option("--export-csv", export_csv, "Write one generated dataset as CSV instead of fitting");
    app.add_option("--replicate", replicate, "Replicate index for --export-csv")->capture_default_str();
    app.add_option("--output", output, "JSON output path");
  }

  int run() {
    if (!(level > 0.0 && level < 1.0)) throw UsageError("--ci-level must lie in (0, 1)");
    brmst::ScenarioConfig cfg = brmst::scenario_config(brmst::parse_scenario(scenario), n);
    cfg.replications = replications;
    cfg.seed = sampler.seed;
    cfg.validate();
    const brmst::ScenarioTruth truth = brmst::scenario_truth(cfg);

    Json doc;
    doc["command"] = "simulate";
    Json config;
    config["scenario"] = std::string(brmst::to_string(cfg.scenario));
    config["n"] = n;
    config["replications"] = replications;
    config["tau"] = cfg.tau;
    doc["truth"] = {{"group0", truth.group0}, {"group1", truth.group1}, {"difference", truth.difference}};

    if (!export_csv.empty()) {
      if (replicate < 0) throw UsageError("--replicate must be non-negative");
      config["seed"] = sampler.seed;
      config["export_csv"] = export_csv;
      config["replicate"] = replicate;
      doc["config"] = config;
      const brmst::SurvivalDataset data = brmst::generate_scenario(cfg, replicate);
      brmst::write_csv(data, export_csv);
      doc["data"] = data_json(data);
      std::cout << "scenario " << brmst::to_string(cfg.scenario) << " replicate " << replicate << ": " << data.rows()
                << " rows written to " << export_csv << '\n';
      finish(doc, output);
      return 0;
    }

    const std::string fitted = family.value_or(std::string(brmst::to_string(cfg.family)));
    const brmst::ModelSpec spec{brmst::parse_family(fitted), brmst::parse_effect(effect), {}};
    config["family"] = fitted;
    config["effect"] = effect;
    config["ci_level"] = level;
    config["sampler"] = sampler.json();
    doc["config"] = config;
    const brmst::Evaluation eval = brmst::evaluate_replications(cfg, spec, sampler.config(), {level, threads});

    Json records = Json::array();
    for (const auto& r : eval.records) records.push_back(report::to_json(r));
    doc["records"] = records;
    doc["metrics"] = report::to_json(eval.metrics);

    const auto& m = eval.metrics;
    std::cout << "scenario " << brmst::to_string(cfg.scenario) << ", n = " << n << ", fitted " << fitted << " / "
              << effect << "\n"
              << "true RMST: group 0 " << truth.group0 << ", group 1 " << truth.group1 << ", difference "
              << truth.difference << "\n"
              << "bias " << m.bias << "  mse " << m.mse << "  mode " << m.mode_diff << "  median " << m.median_diff
              << "  coverage " << m.coverage << "  (" << m.succeeded << " ok, " << m.failed << " failed)\n";
    for (const auto& r : eval.records)
      if (!r.ok) std::cout << "replicate " << r.replicate << " failed: " << r.error << '\n';
    finish(doc, output);
    return 0;
  }
};

// ---------------------------------------------------------------- rmst

struct RmstCommand {
  std::string family = "exponential";
  std::string effect = "none";
  std::optional<double> lambda, k, mu, sigma2, scale, alpha, u, v;
  double tau = 100.0;
  bool exact_lognormal_frailty = false;
  std::string output;

  void add(CLI::App& app) {
    app.add_option("--family", family, "Survival family")->check(CLI::IsMember(kFamilies))->capture_default_str();
    app.add_option("--effect", effect, "Cluster effect")->check(CLI::IsMember(kEffects))->capture_default_str();
    app.add_option("--lambda", lambda, "Rate (exponential, Weibull)");
    app.add_option("--k", k, "Shape (Weibull, log-logistic)");
    app.add_option("--mu", mu, "Location (log-logistic, log-normal)");
    app.add_option("--sigma2", sigma2, "Log-scale variance (log-normal)");
    app.add_option("--scale", scale, "Weibull time scale, S(t) = exp(-(t/scale)^k)");
    app.add_option("--alpha", alpha, "Log-logistic time scale, S(t) = 1/(1+(t/alpha)^k)");
    app.add_option("--u", u, "Random effect on the linear scale");
    app.add_option("--v", v, "Gamma frailty");
    app.add_option("--tau", tau, "RMST horizon")->capture_default_str();
    app.add_flag("--exact-lognormal-frailty", exact_lognormal_frailty,
                 "Integrate S(t)^v numerically instead of the log-normal frailty approximation");
    app.add_option("--output", output, "JSON output path");
  }

  static double need(const std::optional<double>& x, const char* flag, const std::string& family) {
    if (!x) throw UsageError(std::string(flag) + " is required for the " + family + " family");
    return *x;
  }

  int run() {
    if (!(tau > 0.0)) throw UsageError("--tau must be positive");
    const brmst::Family fam = brmst::parse_family(family);
    const brmst::EffectType eff = brmst::parse_effect(effect);
    if (eff == brmst::EffectType::Random && !u) throw UsageError("--u is required with --effect random");
    if (eff == brmst::EffectType::Frailty && !v) throw UsageError("--v is required with --effect frailty");
    if (eff == brmst::EffectType::None && (u || v)) throw UsageError("--u/--v need --effect random or frailty");

    Json params;
    double value = 0.0;
    const bool alternate = (fam == brmst::Family::Weibull && scale) || (fam == brmst::Family::LogLogistic && alpha);
    brmst::RmstOptions options;
    options.exact_lognormal_frailty = exact_lognormal_frailty;

    if (alternate) {
      const double shape = need(k, "--k", family);
      params["k"] = shape;
      if (fam == brmst::Family::Weibull) {
        if (lambda) throw UsageError("give either --lambda or --scale, not both");
        params["scale"] = *scale;
        const brmst::WeibullAlt p{*scale, shape};
        if (eff == brmst::EffectType::Frailty) value = brmst::rmst_alternate_frailty(p, *v, tau);
        else if (eff == brmst::EffectType::Random) value = brmst::rmst(brmst::to_standard(p), brmst::RandomOffset{*u}, tau);
        else value = brmst::rmst_alternate(p, tau);
      } else {
        if (mu) throw UsageError("give either --mu or --alpha, not both");
        params["alpha"] = *alpha;
        const brmst::LogLogisticAlt p{*alpha, shape};
        if (eff == brmst::EffectType::Frailty && shape > 1.0) value = brmst::rmst_alternate_frailty(p, *v, tau);
        else if (eff == brmst::EffectType::Frailty) value = brmst::rmst(brmst::to_standard(p), brmst::Frailty{*v}, tau);
        else if (eff == brmst::EffectType::Random) value = brmst::rmst(brmst::to_standard(p), brmst::RandomOffset{*u}, tau);
        else value = brmst::rmst_alternate(p, tau);
      }
    } else {
      brmst::FamilyParams p;
      switch (fam) {
        case brmst::Family::Exponential:
          p = brmst::Exponential{need(lambda, "--lambda", family)};
          params["lambda"] = *lambda;
          break;
        case brmst::Family::Weibull:
          p = brmst::Weibull{need(lambda, "--lambda or --scale", family), need(k, "--k", family)};
          params["lambda"] = *lambda;
          params["k"] = *k;
          break;
        case brmst::Family::LogLogistic:
          p = brmst::LogLogistic{need(mu, "--mu or --alpha", family), need(k, "--k", family)};
          params["mu"] = *mu;
          params["k"] = *k;
          break;
        case brmst::Family::LogNormal:
          p = brmst::LogNormal{need(mu, "--mu", family), need(sigma2, "--sigma2", family)};
          params["mu"] = *mu;
          params["sigma2"] = *sigma2;
          break;
      }
      brmst::EffectValue e = brmst::NoEffect{};
      if (eff == brmst::EffectType::Random) e = brmst::RandomOffset{*u};
      if (eff == brmst::EffectType::Frailty) e = brmst::Frailty{*v};
      value = brmst::rmst(p, e, tau, options);
    }
    if (u) params["u"] = *u;
    if (v) params["v"] = *v;

    Json doc;
    doc["command"] = "rmst";
    doc["config"] = {{"family", family},
                     {"effect", effect},
                     {"parameters", params},
                     {"tau", tau},
                     {"exact_lognormal_frailty", exact_lognormal_frailty}};
    doc["rmst"] = value;
    std::cout.precision(10);
    std::cout << "RMST(tau = " << tau << ") = " << value << '\n';
    finish(doc, output);
    return 0;
  }
};

// ---------------------------------------------------------------- waic

struct WaicCommand {
  DataFlags data_flags;
  SamplerFlags sampler;
  std::vector<std::string> families;
  std::vector<std::string> effects;
  std::string output;

  void add(CLI::App& app) {
    data_flags.add(app);
    sampler.add(app);
    app.add_option("--family", families, "Family to compare (repeatable; default all four)")
        ->check(CLI::IsMember(kFamilies));
    app.add_option("--effect", effects, "Cluster effect to compare (repeatable; default none)")
        ->check(CLI::IsMember(kEffects));
    app.add_option("--output", output, "JSON output path");
  }

  int run() {
    if (families.empty()) families = kFamilies;
    if (effects.empty()) effects = {"none"};
    const brmst::SamplerConfig cfg = sampler.config();
    const brmst::SurvivalDataset data = data_flags.load();

    Json results = Json::array();
    std::cout << "family        effect          waic        lppd     p_waic\n";
    for (const auto& f : families) {
      for (const auto& e : effects) {
        const brmst::ModelSpec spec{brmst::parse_family(f), brmst::parse_effect(e), {}};
        const brmst::PosteriorDraws draws = brmst::run_chains(data, spec, cfg);
        const brmst::WaicResult w = brmst::waic(data, draws);
        Json row = report::to_json(w);
        row["family"] = f;
        row["effect"] = e;
        results.push_back(row);
        char line[160];
        std::snprintf(line, sizeof line, "%-13s %-8s %12.2f %11.2f %10.2f%s\n", f.c_str(), e.c_str(), w.waic, w.lppd,
                      w.p_waic, w.degenerate ? "  (degenerate)" : "");
        std::cout << line;
      }
    }
    Json doc;
    doc["command"] = "waic";
    Json config = data_flags.json();
    config["families"] = families;
    config["effects"] = effects;
    config["sampler"] = sampler.json();
    doc["config"] = config;
    doc["data"] = data_json(data);
    doc["models"] = results;
    finish(doc, output);
    return 0;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian restricted mean survival time"};
  app.require_subcommand(1);
  FitCommand fit;
  SimulateCommand simulate;
  RmstCommand rmst;
  WaicCommand waic;
  auto* fit_app = app.add_subcommand("fit", "Fit a survival model and summarize the RMST posterior");
  auto* sim_app = app.add_subcommand("simulate", "Run a simulation scenario");
  auto* rmst_app = app.add_subcommand("rmst", "Evaluate a closed-form RMST");
  auto* waic_app = app.add_subcommand("waic", "Compare models by WAIC");
  fit.add(*fit_app);
  simulate.add(*sim_app);
  rmst.add(*rmst_app);
  waic.add(*waic_app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (fit_app->parsed()) return fit.run();
    if (sim_app->parsed()) return simulate.run();
    if (rmst_app->parsed()) return rmst.run();
    if (waic_app->parsed()) return waic.run();
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
