#include "hyperagg/cli.hpp"

#include <cmath>
#include <functional>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "hyperagg/io.hpp"
#include "hyperagg/parallel.hpp"

namespace hyperagg {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Global {
  std::uint64_t seed = 42;
  std::string out;
  std::string format;
  unsigned threads = 0;
};

struct AggregateArgs {
  std::string input;
  std::string variant = "star";
  double x = 1.0;
  double c = 2.0;
  std::string regime = "bounded";
  std::optional<double> b;
  std::optional<double> sigma_eps;
  std::string split = "sequential";
  double ratio = 0.5;
  double tol = 1e-8;
  std::size_t max_iters = 0;
  std::optional<double> temperature;
};

struct AdversarialArgs {
  std::vector<std::size_t> m{16, 64, 256};
  std::vector<std::size_t> n{50, 100, 200, 400, 800};
  double c = 1.0;
  double sigma = 1.0;
  std::size_t reps = 5000;
  bool star = false;
  double x = 1.0;
  double star_c = 2.0;
  double b = 1.0;
};

struct LassoArgs {
  std::vector<std::size_t> n{70, 100, 150};
  std::vector<double> sigma{2.0, 5.0};
  std::size_t reps = 100;
  std::size_t jackknife = 10;
  double temperature = 0.0;
  double c = 2.0;
  double x = 1.0;
  double star_b = 0.0;
  std::string dictionary = "training";
  std::string summary;
};

struct LarsArgs {
  std::string input;
  std::size_t max_steps = 0;
  bool no_standardize = false;
};

// Tracks the step currently running so failures can name it.
struct Stage {
  std::string name = "starting";
  void operator()(std::string s) { name = std::move(s); }
};

class Emitter {
 public:
  Emitter(const Global& g, std::ostream& out) : g_(g), out_(out) {}
  void operator()(const std::string& content) const {
    if (g_.out.empty()) out_ << content;
    else write_file_atomic(g_.out, content);
  }

 private:
  const Global& g_;
  std::ostream& out_;
};

std::string resolve_format(const Global& g, const std::string& fallback) {
  return g.format.empty() ? fallback : g.format;
}

PreselectConfig preselect_config(const AggregateArgs& a, const DictionaryData& data) {
  PreselectConfig cfg;
  cfg.x = a.x;
  cfg.c = a.c;
  // max(|y|_inf, sup_f |f|_inf) unless given.
  const double b = a.b.value_or(std::max(data.sample->y().cwiseAbs().maxCoeff(),
                                         data.dict.preds().cwiseAbs().maxCoeff()));
  if (a.regime == "bounded") {
    cfg.regime = Regime::bounded(b);
  } else {
    if (!a.sigma_eps) throw UsageError("--regime subgaussian requires --sigma-eps");
    cfg.regime = Regime::subgaussian(*a.sigma_eps, b);
  }
  return cfg;
}

SplitSample resolve_split(const AggregateArgs& a, const DictionaryData& data, std::uint64_t seed) {
  if (data.pinned_split) return *data.pinned_split;
  return split_sample(data.sample, seed, a.ratio, a.split == "random" ? SplitMode::random : SplitMode::sequential);
}

void add_input_options(CLI::App* sub, AggregateArgs& a) {
  sub->add_option("--input", a.input, "Dictionary CSV: y,f_1,...,f_M[,split]")->required();
  sub->add_option("--x", a.x, "Confidence level x > 0")->capture_default_str();
  sub->add_option("--c", a.c, "Preselection constant c > 0")->capture_default_str();
  sub->add_option("--regime", a.regime, "Residue regime")
      ->check(CLI::IsMember({"bounded", "subgaussian"}))
      ->capture_default_str();
  sub->add_option("--b", a.b, "Envelope constant b (default: max |y|, |f| of the input)");
  sub->add_option("--sigma-eps", a.sigma_eps, "Noise scale for the subgaussian regime");
  sub->add_option("--split", a.split, "Split mode when the CSV has no split column")
      ->check(CLI::IsMember({"sequential", "random"}))
      ->capture_default_str();
  sub->add_option("--ratio", a.ratio, "Fraction of observations in the training part")->capture_default_str();
}

int cmd_aggregate(const AggregateArgs& a, const Global& g, Stage& stage, const Emitter& emit) {
  const Variant variant = parse_variant(a.variant);
  if ((variant == Variant::aew || variant == Variant::acew) && !a.temperature)
    throw UsageError("--variant " + a.variant + " requires --temperature");
  const std::string format = resolve_format(g, "json");

  stage("reading the dictionary");
  const DictionaryData data = dictionary_from_csv(read_csv_file(a.input));
  const std::span<const double> y(data.sample->y().data(), data.sample->size());

  stage("aggregating");
  std::optional<AggregateResult> result;
  if (variant == Variant::aew || variant == Variant::acew) {
    IndexSet all(data.sample->size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    SimplexWeights w = variant == Variant::aew ? aew_weights(data.dict, y, all, *a.temperature)
                                               : acew_weights(data.dict, y, all, *a.temperature);
    result.emplace(AggregateResult{std::move(w), variant});
  } else {
    const PreselectConfig cfg = preselect_config(a, data);
    const SplitSample split = resolve_split(a, data, g.seed);
    if (variant == Variant::star) result.emplace(star_aggregate(data.dict, split, cfg));
    else if (variant == Variant::segment) result.emplace(segment_aggregate(data.dict, split, cfg));
    else result.emplace(convex_aggregate(data.dict, split, cfg, {a.tol, a.max_iters}));
  }

  stage("writing output");
  if (format == "json") {
    emit(to_json(*result, data.dict).dump(2) + "\n");
  } else {
    std::ostringstream csv;
    csv << "index,label,weight\n";
    for (std::size_t j : result->weights.support())
      csv << j << ',' << data.dict.labels()[j] << ',' << format_double(result->weights.theta()(static_cast<Eigen::Index>(j)))
          << '\n';
    emit(csv.str());
  }
  return 0;
}

int cmd_preselect(const AggregateArgs& a, const Global& g, Stage& stage, const Emitter& emit) {
  const std::string format = resolve_format(g, "json");
  stage("reading the dictionary");
  const DictionaryData data = dictionary_from_csv(read_csv_file(a.input));
  stage("preselecting");
  const PreselectConfig cfg = preselect_config(a, data);
  const PreselectResult r = preselect(data.dict, resolve_split(a, data, g.seed), cfg);
  stage("writing output");
  if (format == "json") {
    emit(to_json(r, data.dict).dump(2) + "\n");
    return 0;
  }
  std::ostringstream csv;
  csv << "index,label,risk,threshold,kept\n";
  std::vector<char> kept(r.risks.size(), 0);
  for (std::size_t j : r.kept) kept[j] = 1;
  for (std::size_t j = 0; j < r.risks.size(); ++j)
    csv << j << ',' << data.dict.labels()[j] << ',' << format_double(r.risks[j]) << ','
        << format_double(r.thresholds[j]) << ',' << (kept[j] ? 1 : 0) << '\n';
  emit(csv.str());
  return 0;
}

int cmd_adversarial(const AdversarialArgs& a, const Global& g, Stage& stage, const Emitter& emit) {
  const std::string format = resolve_format(g, "csv");
  std::ostringstream csv;
  nlohmann::json rows = nlohmann::json::array();
  csv << "M,n,reps,p_misselect,excess_risk,stderr,sqrt_logM_over_n";
  if (a.star) csv << ",star_excess_risk";
  csv << '\n';
  for (std::size_t m : a.m) {
    for (std::size_t n : a.n) {
      stage("adversarial Monte Carlo at M=" + std::to_string(m) + ", n=" + std::to_string(n));
      const AdversarialModel model{m, n, a.c, a.sigma};
      const std::uint64_t cfg_seed = derive_seed(derive_seed(g.seed, m), n);
      const ErmReport erm = erm_excess_risk_mc(model, a.reps, derive_seed(cfg_seed, 0), g.threads);
      csv << m << ',' << n << ',' << a.reps << ',' << format_double(erm.p_misselect) << ','
          << format_double(erm.excess_risk) << ',' << format_double(erm.stderr_excess) << ','
          << format_double(erm.reference);
      nlohmann::json row{{"M", m},
                         {"n", n},
                         {"reps", a.reps},
                         {"misselections", erm.misselections},
                         {"p_misselect", erm.p_misselect},
                         {"excess_risk", erm.excess_risk},
                         {"stderr", erm.stderr_excess},
                         {"sqrt_logM_over_n", erm.reference}};
      if (a.star) {
        PreselectConfig cfg;
        cfg.x = a.x;
        cfg.c = a.star_c;
        cfg.regime = Regime::subgaussian(a.sigma, a.b);
        const StarReport star = star_excess_risk_mc(model, cfg, a.reps, derive_seed(cfg_seed, 1), g.threads);
        csv << ',' << format_double(star.star_excess);
        row["star_excess_risk"] = star.star_excess;
        row["star_stderr"] = star.star_stderr;
        row["erm_excess_same_sample"] = star.erm_excess;
        row["oracle_excess"] = star.oracle_excess;
      }
      csv << '\n';
      rows.push_back(std::move(row));
    }
  }
  stage("writing output");
  emit(format == "json" ? rows.dump(2) + "\n" : csv.str());
  return 0;
}

int cmd_lasso(const LassoArgs& a, const Global& g, Stage& stage, const Emitter& emit) {
  const std::string format = resolve_format(g, "csv");
  const DictionarySource source = parse_dictionary_source(a.dictionary);
  std::ostringstream csv;
  csv << "n,sigma,rep,method,beta_err,pred_err\n";
  nlohmann::json summary = nlohmann::json::array();
  for (std::size_t n : a.n) {
    for (double sigma : a.sigma) {
      stage("lasso experiment at n=" + std::to_string(n) + ", sigma=" + format_double(sigma));
      LassoStudyConfig cfg;
      cfg.n = n;
      cfg.sigma = sigma;
      cfg.reps = a.reps;
      cfg.jackknife_splits = a.jackknife;
      cfg.temperature = a.temperature;
      cfg.star_c = a.c;
      cfg.confidence_x = a.x;
      cfg.star_b = a.star_b;
      cfg.dictionary_source = source;
      cfg.seed = derive_seed(derive_seed(g.seed, n), static_cast<std::uint64_t>(std::llround(sigma * 1e6)));
      const MonteCarloReport report = run_lasso_study(cfg, g.threads);
      for (const auto& r : report.records)
        csv << n << ',' << format_double(sigma) << ',' << r.rep << ',' << r.method << ','
            << format_double(r.beta_err) << ',' << format_double(r.pred_err) << '\n';
      summary.push_back({{"n", n},
                         {"sigma", sigma},
                         {"reps", a.reps},
                         {"failures", report.failures},
                         {"failure_messages", report.failure_messages},
                         {"methods", to_json(report.summary)}});
    }
  }
  stage("writing output");
  const std::string summary_text = summary.dump(2) + "\n";
  if (!a.summary.empty()) write_file_atomic(a.summary, summary_text);
  emit(format == "json" ? summary_text : csv.str());
  return 0;
}

int cmd_lars(const LarsArgs& a, const Global& g, Stage& stage, const Emitter& emit) {
  const std::string format = resolve_format(g, "csv");
  stage("reading the regression data");
  const RegressionData data = regression_from_csv(read_csv_file(a.input));
  stage("computing the lasso path");
  LarsOptions opts;
  opts.max_steps = a.max_steps;
  opts.standardize = !a.no_standardize;
  const LassoPath path = lars_path(data.x, data.y, opts);
  stage("writing output");
  if (format == "csv") {
    emit(knots_csv(path, data.feature_names));
    return 0;
  }
  nlohmann::json knots = nlohmann::json::array();
  for (std::size_t k = 0; k < path.knots.size(); ++k) {
    const auto& knot = path.knots[k];
    knots.push_back({{"step", k},
                     {"penalty_level", knot.penalty_level},
                     {"df", knot.active_set.size()},
                     {"rss", knot.rss},
                     {"intercept", knot.intercept},
                     {"active_set", knot.active_set},
                     {"coefs", std::vector<double>(knot.coefs.data(), knot.coefs.data() + knot.coefs.size())}});
  }
  emit(nlohmann::json{{"standardized", path.standardized},
                      {"truncated", path.truncated},
                      {"truncation_reason", path.truncation_reason},
                      {"features", data.feature_names},
                      {"knots", knots}}
           .dump(2) +
       "\n");
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hyper-sparse aggregation of predictor dictionaries", "hyperagg"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  Global g;
  app.add_option("--seed", g.seed, "Seed for every random draw")->capture_default_str();
  app.add_option("--out", g.out, "Output path (default: stdout); written atomically");
  app.add_option("--format", g.format, "Output format (default depends on the subcommand)")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", g.threads, "Worker threads, 0 = auto; never changes output")->capture_default_str();

  AggregateArgs agg;
  auto* sub_agg = app.add_subcommand("aggregate", "Star, segment, convex-hull or exponential-weights aggregate");
  add_input_options(sub_agg, agg);
  sub_agg->add_option("--variant", agg.variant, "Aggregation procedure")
      ->check(CLI::IsMember({"star", "segment", "convex", "aew", "acew"}))
      ->capture_default_str();
  sub_agg->add_option("--tol", agg.tol, "Frank-Wolfe duality-gap tolerance (convex)")->capture_default_str();
  sub_agg->add_option("--max-iters", agg.max_iters, "Frank-Wolfe iteration cap, 0 = 10|kept| + 100");
  sub_agg->add_option("--temperature", agg.temperature, "Temperature T for aew/acew (full sample)");
  sub_agg->footer(
      "Output (json): {variant, weights: [{index, label, value}], lambda, pair, validation_risk,\n"
      "  converged, kept, erm_index[, duality_gap, iterations]}. lambda is the weight on pair[0];\n"
      "  validation_risk is null for aew/acew.\n"
      "Output (csv): index,label,weight for every nonzero weight.");

  AggregateArgs pre;
  auto* sub_pre = app.add_subcommand("preselect", "Preselection set on the training part");
  add_input_options(sub_pre, pre);
  sub_pre->footer(
      "Output (json): {kept, erm_index, phi, predictors: [{index, label, risk, threshold, kept}]}.\n"
      "Output (csv): index,label,risk,threshold,kept.");

  AdversarialArgs adv;
  auto* sub_adv = app.add_subcommand("adversarial-demo", "ERM excess risk on the dyadic construction");
  sub_adv->add_option("--M", adv.m, "Dictionary sizes (repeatable)")->capture_default_str();
  sub_adv->add_option("--n", adv.n, "Sample sizes (repeatable)")->capture_default_str();
  sub_adv->add_option("--C", adv.c, "Constant C in h = (C/4) sqrt(log M / n)")->capture_default_str();
  sub_adv->add_option("--sigma", adv.sigma, "Noise level")->capture_default_str();
  sub_adv->add_option("--reps", adv.reps, "Monte Carlo replications")->capture_default_str();
  sub_adv->add_flag("--star", adv.star, "Also run the star aggregate on 2n observations");
  sub_adv->add_option("--x", adv.x, "Star confidence level")->capture_default_str();
  sub_adv->add_option("--c", adv.star_c, "Star preselection constant")->capture_default_str();
  sub_adv->add_option("--b", adv.b, "Star subgaussian envelope b (sigma_eps = --sigma)")->capture_default_str();
  sub_adv->footer(
      "Output (csv): M,n,reps,p_misselect,excess_risk,stderr,sqrt_logM_over_n[,star_excess_risk].\n"
      "Output (json): one object per (M, n) with the same fields plus misselections and,\n"
      "  with --star, star_stderr, erm_excess_same_sample and oracle_excess.");

  LassoArgs lasso;
  auto* sub_lasso = app.add_subcommand("lasso-experiment", "Cp lasso vs AEW vs star on simulated sparse data");
  sub_lasso->add_option("--n", lasso.n, "Sample sizes (repeatable)")->capture_default_str();
  sub_lasso->add_option("--sigma", lasso.sigma, "Noise levels (repeatable)")->capture_default_str();
  sub_lasso->add_option("--reps", lasso.reps, "Replications per (n, sigma)")->capture_default_str();
  sub_lasso->add_option("--jackknife", lasso.jackknife, "Random splits averaged per replication")->capture_default_str();
  sub_lasso->add_option("--temperature", lasso.temperature, "AEW temperature, 0 = 4 sigma^2")->capture_default_str();
  sub_lasso->add_option("--c", lasso.c, "Star preselection constant")->capture_default_str();
  sub_lasso->add_option("--x", lasso.x, "Star confidence level")->capture_default_str();
  sub_lasso->add_option("--star-b", lasso.star_b, "Star bounded-regime b, 0 = max |y|")->capture_default_str();
  sub_lasso->add_option("--dictionary", lasso.dictionary, "Dictionary behind the aggregation weights")
      ->check(CLI::IsMember({"training", "full"}))
      ->capture_default_str();
  sub_lasso->add_option("--summary", lasso.summary, "Also write the summary JSON here");
  sub_lasso->footer(
      "Output (csv): n,sigma,rep,method,beta_err,pred_err with method in {cp, aew, star}.\n"
      "Output (json) and --summary: [{n, sigma, reps, failures, failure_messages,\n"
      "  methods: {method: {beta_err|pred_err: {count, mean, median, q1, q3}}}}].");

  LarsArgs lars;
  auto* sub_lars = app.add_subcommand("lars-path", "Lasso path by least-angle regression");
  sub_lars->add_option("--input", lars.input, "CSV with y first, then features")->required();
  sub_lars->add_option("--max-steps", lars.max_steps, "Step cap, 0 = 8 min(n, p)");
  sub_lars->add_flag("--no-standardize", lars.no_standardize, "Raw design, no intercept");
  sub_lars->footer(
      "Output (csv): step,penalty_level,df,rss,<one column per feature>.\n"
      "Output (json): {standardized, truncated, truncation_reason, features,\n"
      "  knots: [{step, penalty_level, df, rss, intercept, active_set, coefs}]}.");

  std::vector<std::string> argv_store{"hyperagg"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    // Subcommand help goes through the same path as the top-level one.
    if (e.get_exit_code() == 0) {
      for (auto* sub : app.get_subcommands()) out << sub->help();
      if (app.get_subcommands().empty()) out << app.help();
      return 0;
    }
    err << "hyperagg: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  Stage stage;
  const Emitter emit(g, out);
  try {
    if (*sub_agg) return cmd_aggregate(agg, g, stage, emit);
    if (*sub_pre) return cmd_preselect(pre, g, stage, emit);
    if (*sub_adv) return cmd_adversarial(adv, g, stage, emit);
    if (*sub_lasso) return cmd_lasso(lasso, g, stage, emit);
    if (*sub_lars) return cmd_lars(lars, g, stage, emit);
  } catch (const UsageError& e) {
    err << "hyperagg: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    err << "hyperagg: error while " << stage.name << ": " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace hyperagg
