#include "choquet/cli.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "choquet/aggregate.hpp"
#include "choquet/data.hpp"
#include "choquet/errors.hpp"
#include "choquet/ga.hpp"
#include "choquet/measures.hpp"
#include "choquet/metrics.hpp"

namespace choquet::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunConfig {
  std::string input;
  bool synthetic = false;
  bool normalize = false;
  std::vector<double> densities;
  std::string measure_file;
  std::string rule = "choquet";
  double threshold = 0.5;
  double modality_threshold = 0.5;
  std::vector<double> weights;
  GaConfig ga;
  std::string out = ".";
};

std::string fixed(double value, int decimals) {
  char buf[64];
  const auto result =
      std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, decimals);
  return std::string(buf, result.ptr);
}

std::string shortest(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

// "m12" style label with one-based criterion numbers.
std::string subset_label(CriteriaSubset subset) {
  std::string label = "m";
  for (auto i : subset.indices()) label += std::to_string(i + 1);
  return label;
}

LabeledScoreSet load_input(const RunConfig& cfg) {
  const bool has_file = !cfg.input.empty();
  if (has_file == cfg.synthetic) {
    throw InvalidArgument("give exactly one input source: --input <path> or --synthetic");
  }
  if (cfg.synthetic) return synthetic_dataset();
  return load_csv(cfg.input, cfg.normalize);
}

std::optional<LambdaMeasure> load_measure(const RunConfig& cfg) {
  if (!cfg.densities.empty() && !cfg.measure_file.empty()) {
    throw InvalidArgument("give either --densities or --measure-file, not both");
  }
  if (!cfg.densities.empty()) return LambdaMeasure(DensityVector(cfg.densities));
  if (cfg.measure_file.empty()) return std::nullopt;

  std::ifstream in(cfg.measure_file);
  if (!in) throw InvalidArgument("cannot open measure file " + cfg.measure_file);
  try {
    const auto doc = json::parse(in);
    return LambdaMeasure(DensityVector(doc.at("densities").get<std::vector<double>>()));
  } catch (const json::exception& e) {
    throw InvalidArgument("malformed measure file " + cfg.measure_file + ": " + e.what());
  }
}

fs::path prepare_out_dir(const RunConfig& cfg) {
  const fs::path dir(cfg.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw InvalidArgument("cannot create output directory " + cfg.out);
  }
  return dir;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  return out;
}

FusionRule build_rule(const RunConfig& cfg, std::size_t modalities,
                      const std::optional<LambdaMeasure>& measure) {
  const RuleKind kind = parse_rule_kind(cfg.rule);
  FusionRule rule;
  switch (kind) {
    case RuleKind::kChoquet:
      if (!measure) {
        throw InvalidArgument("the choquet rule needs --densities or --measure-file");
      }
      rule = FusionRule::choquet(*measure);
      break;
    case RuleKind::kWeightedSum:
      rule = FusionRule::weighted_sum(cfg.weights);
      break;
    default:
      rule = FusionRule::simple(kind, cfg.modality_threshold);
      break;
  }
  rule.validate(modalities);
  return rule;
}

struct Fused {
  std::vector<double> clients;
  std::vector<double> impostors;
};

Fused fuse_all(const LabeledScoreSet& set, const FusionRule& rule) {
  Fused f;
  for (const auto& r : set.clients()) f.clients.push_back(rule_fuse(r.scores, rule));
  for (const auto& r : set.impostors()) f.impostors.push_back(rule_fuse(r.scores, rule));
  return f;
}

double evaluation_threshold(const FusionRule& rule, double threshold) {
  return is_decision_rule(rule.kind) ? kDecisionThreshold : threshold;
}

void print_measure(const LambdaMeasure& measure, std::ostream& out) {
  out << "lambda = " << format_number(measure.lambda()) << '\n';
  const std::size_t n = measure.size();
  if (n > 6) return;
  out << "subset measures:\n";
  // Order by cardinality, then by mask, like a hand-written table.
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      const CriteriaSubset s(mask);
      if (s.count() != k) continue;
      out << "  " << std::left << std::setw(8) << subset_label(s) << " = "
          << format_number(measure(s)) << '\n';
    }
  }
}

json measure_json(const LambdaMeasure& measure) {
  json subsets = json::array();
  const std::size_t n = measure.size();
  if (n <= kMaxTabulatedCriteria) {
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      const CriteriaSubset s(mask);
      subsets.push_back({{"criteria", s.indices()}, {"value", measure(s)}});
    }
  }
  return {{"densities", std::vector<double>(measure.densities().values().begin(),
                                            measure.densities().values().end())},
          {"lambda", measure.lambda()},
          {"subsets", subsets}};
}

json eval_json(const EvalReport& report, double threshold) {
  const auto best = report.min_error();
  return {{"eer", report.eer()},
          {"eer_threshold", report.eer_threshold()},
          {"error_rate_at_eer_threshold", report.error_rate_at(report.eer_threshold())},
          {"threshold", threshold},
          {"error_rate_at_threshold", report.error_rate_at(threshold)},
          {"min_error_rate", best.error_rate},
          {"min_error_threshold", best.threshold}};
}

void write_json(const fs::path& path, const json& doc) {
  auto out = open_output(path);
  out << doc.dump(2) << '\n';
}

EvolveResult run_optimizer(const RunConfig& cfg, const LabeledScoreSet& set,
                           std::ostream& out) {
  std::vector<DensityVector> seeds;
  if (!cfg.densities.empty()) seeds.emplace_back(cfg.densities);
  out << "optimizing densities: N=" << cfg.ga.population_size
      << " g_m=" << cfg.ga.max_generations << " seed=" << cfg.ga.rng_seed
      << " stop_eer=" << format_number(cfg.ga.eer_stop_threshold) << '\n';
  return evolve(set, cfg.ga, seeds);
}

int cmd_fuse(const RunConfig& cfg, std::ostream& out) {
  const auto set = load_input(cfg);
  const auto measure = load_measure(cfg);
  const auto rule = build_rule(cfg, set.modality_count(), measure);
  const auto dir = prepare_out_dir(cfg);

  if (rule.kind == RuleKind::kChoquet) print_measure(*rule.measure, out);

  const auto path = dir / "fused.csv";
  auto file = open_output(path);
  file << "person_id,label,fused\n";
  std::size_t rows = 0;
  for (const auto* records : {&set.clients(), &set.impostors()}) {
    for (const auto& r : *records) {
      file << r.person_id << ',' << to_string(r.label) << ','
           << shortest(rule_fuse(r.scores, rule)) << '\n';
      ++rows;
    }
  }
  out << "wrote " << rows << " fused scores (" << rule.name() << ") to "
      << path.string() << '\n';
  return kSuccess;
}

int cmd_optimize(const RunConfig& cfg, std::ostream& out) {
  const auto set = load_input(cfg);
  if (!cfg.measure_file.empty()) {
    throw InvalidArgument("optimize learns a measure; --measure-file is not accepted");
  }
  const auto dir = prepare_out_dir(cfg);
  const auto result = run_optimizer(cfg, set, out);

  const LambdaMeasure measure(DensityVector(result.best.genes));
  const auto fused = fuse_all(set, FusionRule::choquet(measure));
  const auto report = EvalReport::evaluate(fused.clients, fused.impostors);

  json doc = measure_json(measure);
  doc["evaluation"] = eval_json(report, cfg.threshold);
  doc["stop_reason"] = to_string(result.stop_reason);
  doc["generations"] = result.generations;
  doc["config"] = {{"population_size", cfg.ga.population_size},
                   {"max_generations", cfg.ga.max_generations},
                   {"eer_stop_threshold", cfg.ga.eer_stop_threshold},
                   {"mutation_bound", cfg.ga.mutation_bound},
                   {"rng_seed", cfg.ga.rng_seed},
                   {"offspring_per_generation", cfg.ga.offspring_count()},
                   {"elitism_count", cfg.ga.elitism_count}};
  write_json(dir / "measure.json", doc);
  {
    auto history = open_output(dir / "history.csv");
    write_history_csv(result.history, history);
  }

  out << "stop: " << to_string(result.stop_reason) << " after " << result.generations
      << " generations\n";
  out << "densities:";
  for (double g : result.best.genes) out << ' ' << format_number(g);
  out << '\n';
  print_measure(measure, out);
  out << "EER = " << fixed(100.0 * report.eer(), 2) << "%, min error rate = "
      << fixed(100.0 * report.min_error().error_rate, 2) << "%\n";
  out << "wrote " << (dir / "measure.json").string() << " and "
      << (dir / "history.csv").string() << '\n';
  return kSuccess;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out) {
  const auto set = load_input(cfg);
  auto measure = load_measure(cfg);
  const auto dir = prepare_out_dir(cfg);

  struct Row {
    std::string name;
    Fused fused;
    double threshold;
  };
  std::vector<Row> rows;
  for (std::size_t m = 0; m < set.modality_count(); ++m) {
    rows.push_back({"M" + std::to_string(m + 1),
                    {set.column(m, Label::kClient), set.column(m, Label::kImpostor)},
                    cfg.threshold});
  }
  std::vector<FusionRule> rules;
  for (auto kind : {RuleKind::kAnd, RuleKind::kOr, RuleKind::kProd, RuleKind::kMean,
                    RuleKind::kMin, RuleKind::kMax, RuleKind::kMajorityVote}) {
    rules.push_back(FusionRule::simple(kind, cfg.modality_threshold));
  }
  if (!cfg.weights.empty()) rules.push_back(FusionRule::weighted_sum(cfg.weights));
  if (!measure) {
    const auto result = run_optimizer(cfg, set, out);
    measure.emplace(DensityVector(result.best.genes));
  }
  rules.push_back(FusionRule::choquet(*measure));
  for (const auto& rule : rules) {
    rule.validate(set.modality_count());
    rows.push_back({rule.name(), fuse_all(set, rule), evaluation_threshold(rule, cfg.threshold)});
  }

  auto csv = open_output(dir / "comparison.csv");
  csv << "rule,threshold,error_rate_pct,eer_pct,min_error_rate_pct\n";
  out << "choquet densities:";
  for (double d : measure->densities().values()) out << ' ' << format_number(d);
  out << "\n\n";
  out << std::left << std::setw(14) << "rule" << std::right << std::setw(12)
      << "error(%)" << std::setw(10) << "EER(%)" << std::setw(14) << "min err(%)"
      << '\n';
  for (const auto& row : rows) {
    const auto report = EvalReport::evaluate(row.fused.clients, row.fused.impostors);
    const double rate = 100.0 * report.error_rate_at(row.threshold);
    const double eer_pct = 100.0 * report.eer();
    const double min_pct = 100.0 * report.min_error().error_rate;
    out << std::left << std::setw(14) << row.name << std::right << std::setw(12)
        << fixed(rate, 2) << std::setw(10) << fixed(eer_pct, 2) << std::setw(14)
        << fixed(min_pct, 2) << '\n';
    csv << row.name << ',' << format_number(row.threshold) << ',' << fixed(rate, 2)
        << ',' << fixed(eer_pct, 2) << ',' << fixed(min_pct, 2) << '\n';
    auto roc = open_output(dir / ("roc_" + row.name + ".csv"));
    write_roc_csv(report, roc);
  }
  out << "\nwrote " << (dir / "comparison.csv").string() << " and per-rule ROC files\n";
  return kSuccess;
}

int cmd_eval(const RunConfig& cfg, std::ostream& out) {
  const auto set = load_input(cfg);
  const auto measure = load_measure(cfg);
  const auto rule = build_rule(cfg, set.modality_count(), measure);
  const auto dir = prepare_out_dir(cfg);

  const auto fused = fuse_all(set, rule);
  const auto report = EvalReport::evaluate(fused.clients, fused.impostors);
  const double t = evaluation_threshold(rule, cfg.threshold);

  json doc = eval_json(report, t);
  doc["rule"] = rule.name();
  write_json(dir / "eval.json", doc);
  {
    auto roc = open_output(dir / "roc.csv");
    write_roc_csv(report, roc);
  }
  const auto best = report.min_error();
  out << "rule: " << rule.name() << '\n'
      << "EER = " << fixed(100.0 * report.eer(), 2) << "% at threshold "
      << format_number(report.eer_threshold()) << '\n'
      << "error rate at " << format_number(t) << " = "
      << fixed(100.0 * report.error_rate_at(t), 2) << "%\n"
      << "min error rate = " << fixed(100.0 * best.error_rate, 2)
      << "% at threshold " << format_number(best.threshold) << '\n'
      << "wrote " << (dir / "eval.json").string() << " and "
      << (dir / "roc.csv").string() << '\n';
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Choquet-integral score fusion with GA-learned lambda-measures", "choquet_fusion"};
  app.set_config("--config", "", "TOML/INI file with option defaults");
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  app.add_option("--input", cfg.input, "Labeled score CSV (person_id,label,m1,...)");
  app.add_flag("--synthetic", cfg.synthetic, "Use the embedded 60-person synthetic set");
  app.add_flag("--normalize", cfg.normalize, "Min-max normalize each input column");
  app.add_option("--densities", cfg.densities, "Singleton densities, e.g. 0.35,0.25,0.3")
      ->delimiter(',');
  app.add_option("--measure-file", cfg.measure_file, "measure.json written by optimize");
  app.add_option("--rule", cfg.rule,
                 "choquet|and|or|prod|mean|min|max|vote|weighted_sum");
  app.add_option("--threshold", cfg.threshold, "Accept threshold for score rules")
      ->capture_default_str();
  app.add_option("--modality-threshold", cfg.modality_threshold,
                 "Per-modality threshold for and/or/vote")
      ->capture_default_str();
  app.add_option("--weights", cfg.weights, "Weights for weighted_sum")->delimiter(',');
  app.add_option("--seed", cfg.ga.rng_seed, "GA random seed")->capture_default_str();
  app.add_option("--generations", cfg.ga.max_generations, "GA generation budget")
      ->capture_default_str();
  app.add_option("--population", cfg.ga.population_size, "GA population size")
      ->capture_default_str();
  app.add_option("--stop-eer", cfg.ga.eer_stop_threshold, "Stop once EER <= this")
      ->capture_default_str();
  app.add_option("--mutation-bound", cfg.ga.mutation_bound, "Mutation half-width y")
      ->capture_default_str();
  app.add_option("--elitism", cfg.ga.elitism_count, "Parents always retained")
      ->capture_default_str();
  app.add_option("--threads", cfg.ga.threads, "Fitness evaluation threads")
      ->capture_default_str();
  app.add_option("--out", cfg.out, "Output directory")->capture_default_str();

  auto* fuse = app.add_subcommand("fuse", "Fuse every record into one score");
  auto* optimize = app.add_subcommand("optimize", "Learn densities with the GA");
  auto* compare = app.add_subcommand("compare", "Error rates of every fusion rule");
  auto* eval = app.add_subcommand("eval", "EER and ROC of one fusion rule");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (fuse->parsed()) return cmd_fuse(cfg, out);
    if (optimize->parsed()) return cmd_optimize(cfg, out);
    if (compare->parsed()) return cmd_compare(cfg, out);
    if (eval->parsed()) return cmd_eval(cfg, out);
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kNumericError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace choquet::cli
