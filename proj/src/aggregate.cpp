#include "choquet/aggregate.hpp"

#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>

namespace choquet {

ScoreVector::ScoreVector(std::vector<double> scores) : scores_(std::move(scores)) {
  for (std::size_t i = 0; i < scores_.size(); ++i) {
    if (!(scores_[i] >= 0.0 && scores_[i] <= 1.0)) {
      std::ostringstream msg;
      msg << "score " << i << " = " << scores_[i] << " is outside [0, 1]";
      throw InvalidArgument(msg.str());
    }
  }
}

std::string_view to_string(RuleKind kind) {
  switch (kind) {
    case RuleKind::kChoquet: return "choquet";
    case RuleKind::kAnd: return "and";
    case RuleKind::kOr: return "or";
    case RuleKind::kProd: return "prod";
    case RuleKind::kMean: return "mean";
    case RuleKind::kMin: return "min";
    case RuleKind::kMax: return "max";
    case RuleKind::kMajorityVote: return "vote";
    case RuleKind::kWeightedSum: return "weighted_sum";
  }
  return "unknown";
}

RuleKind parse_rule_kind(std::string_view name) {
  std::string lower(name);
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "choquet") return RuleKind::kChoquet;
  if (lower == "and") return RuleKind::kAnd;
  if (lower == "or") return RuleKind::kOr;
  if (lower == "prod" || lower == "product") return RuleKind::kProd;
  if (lower == "mean") return RuleKind::kMean;
  if (lower == "min") return RuleKind::kMin;
  if (lower == "max") return RuleKind::kMax;
  if (lower == "vote" || lower == "majority_vote") return RuleKind::kMajorityVote;
  if (lower == "weighted_sum" || lower == "weighted") return RuleKind::kWeightedSum;
  throw InvalidArgument("unknown fusion rule '" + std::string(name) + "'");
}

bool is_decision_rule(RuleKind kind) {
  return kind == RuleKind::kAnd || kind == RuleKind::kOr ||
         kind == RuleKind::kMajorityVote;
}

FusionRule FusionRule::choquet(LambdaMeasure measure) {
  FusionRule rule;
  rule.kind = RuleKind::kChoquet;
  rule.measure.emplace(std::move(measure));
  return rule;
}

FusionRule FusionRule::weighted_sum(std::vector<double> weights) {
  FusionRule rule;
  rule.kind = RuleKind::kWeightedSum;
  rule.weights = std::move(weights);
  return rule;
}

FusionRule FusionRule::simple(RuleKind kind, double modality_threshold) {
  FusionRule rule;
  rule.kind = kind;
  rule.modality_threshold = modality_threshold;
  return rule;
}

void FusionRule::validate(std::size_t n) const {
  if (n == 0) throw InvalidArgument("cannot fuse an empty score vector");
  switch (kind) {
    case RuleKind::kChoquet:
      if (!measure) throw InvalidArgument("choquet rule needs a measure");
      if (measure->size() != n) {
        throw InvalidArgument("choquet measure size does not match the scores");
      }
      break;
    case RuleKind::kWeightedSum: {
      if (weights.size() != n) {
        throw InvalidArgument("weighted_sum needs one weight per modality");
      }
      double total = 0.0;
      for (double w : weights) {
        if (!(w >= 0.0)) throw InvalidArgument("weights must be nonnegative");
        total += w;
      }
      if (std::abs(total - 1.0) > 1e-9) {
        throw InvalidArgument("weights must sum to 1");
      }
      break;
    }
    case RuleKind::kAnd:
    case RuleKind::kOr:
    case RuleKind::kMajorityVote:
      if (!(modality_threshold >= 0.0 && modality_threshold <= 1.0)) {
        throw InvalidArgument("modality threshold must lie in [0, 1]");
      }
      break;
    default:
      break;
  }
}

double rule_fuse(std::span<const double> scores, const FusionRule& rule) {
  const std::size_t n = scores.size();
  rule.validate(n);

  std::size_t accepted = 0;
  if (is_decision_rule(rule.kind)) {
    for (double s : scores) accepted += s >= rule.modality_threshold ? 1 : 0;
  }

  switch (rule.kind) {
    case RuleKind::kChoquet:
      return choquet_fuse(scores, *rule.measure);
    case RuleKind::kAnd:
      return accepted == n ? 1.0 : 0.0;
    case RuleKind::kOr:
      return accepted > 0 ? 1.0 : 0.0;
    case RuleKind::kMajorityVote:
      return 2 * accepted > n ? 1.0 : 0.0;
    case RuleKind::kProd:
      return std::accumulate(scores.begin(), scores.end(), 1.0, std::multiplies<>{});
    case RuleKind::kMean:
      return std::accumulate(scores.begin(), scores.end(), 0.0) /
             static_cast<double>(n);
    case RuleKind::kMin:
      return *std::min_element(scores.begin(), scores.end());
    case RuleKind::kMax:
      return *std::max_element(scores.begin(), scores.end());
    case RuleKind::kWeightedSum:
      return std::inner_product(scores.begin(), scores.end(), rule.weights.begin(), 0.0);
  }
  throw InvalidArgument("unhandled fusion rule");
}

}  // namespace choquet
