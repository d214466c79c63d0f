#pragma once

#include <algorithm>
#include <array>
#include <concepts>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "choquet/errors.hpp"
#include "choquet/measures.hpp"

namespace choquet {

/// Anything that assigns a value to a subset of criteria and knows how many
/// criteria it covers.
template <typename M>
concept SetFunction = requires(const M& m, CriteriaSubset s) {
  { m(s) } -> std::convertible_to<double>;
  { m.size() } -> std::convertible_to<std::size_t>;
};

/// Per-modality similarity scores, each in [0, 1].
class ScoreVector {
 public:
  ScoreVector() = default;
  explicit ScoreVector(std::vector<double> scores);

  std::size_t size() const { return scores_.size(); }
  double operator[](std::size_t i) const { return scores_[i]; }
  std::span<const double> values() const { return scores_; }

  friend bool operator==(const ScoreVector&, const ScoreVector&) = default;

 private:
  std::vector<double> scores_;
};

/// Discrete Choquet integral of `scores` with respect to `measure`.
///
/// Scores are visited in ascending order (ties broken by criterion index);
/// the i-th increment is weighted by the measure of the criteria whose
/// scores are at or above the i-th sorted score.
template <SetFunction M>
double choquet_fuse(std::span<const double> scores, const M& measure) {
  const std::size_t n = scores.size();
  if (n != measure.size()) {
    throw InvalidArgument("score vector length does not match the measure");
  }
  if (n == 0) throw InvalidArgument("cannot fuse an empty score vector");

  std::array<std::uint8_t, kMaxCriteria> order;
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<std::uint8_t>(i);
  std::sort(order.begin(), order.begin() + n, [&](std::uint8_t a, std::uint8_t b) {
    return scores[a] < scores[b] || (scores[a] == scores[b] && a < b);
  });

  auto remaining = CriteriaSubset::full(n);
  double previous = 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double value = scores[order[k]];
    total += (value - previous) * measure(remaining);
    previous = value;
    remaining = remaining.without(order[k]);
  }
  return total;
}

template <SetFunction M>
double choquet_fuse(const ScoreVector& scores, const M& measure) {
  return choquet_fuse(scores.values(), measure);
}

enum class RuleKind {
  kChoquet,
  kAnd,
  kOr,
  kProd,
  kMean,
  kMin,
  kMax,
  kMajorityVote,
  kWeightedSum,
};

std::string_view to_string(RuleKind kind);

/// Accepts "choquet", "and", "or", "prod", "mean", "min", "max",
/// "vote"/"majority_vote" and "weighted_sum" (case-insensitive).
RuleKind parse_rule_kind(std::string_view name);

/// AND, OR and majority vote binarize each modality and emit 0 or 1.
bool is_decision_rule(RuleKind kind);

/// Threshold at which a decision rule's 0/1 output is evaluated.
inline constexpr double kDecisionThreshold = 0.5;

struct FusionRule {
  RuleKind kind = RuleKind::kMean;
  std::optional<LambdaMeasure> measure;  // kChoquet
  std::vector<double> weights;           // kWeightedSum
  double modality_threshold = 0.5;       // kAnd, kOr, kMajorityVote

  static FusionRule choquet(LambdaMeasure measure);
  static FusionRule weighted_sum(std::vector<double> weights);
  static FusionRule simple(RuleKind kind, double modality_threshold = 0.5);

  /// Throws InvalidArgument on missing or malformed parameters, or when the
  /// rule cannot be applied to n modalities.
  void validate(std::size_t n) const;

  std::string name() const { return std::string(to_string(kind)); }
};

/// Fused score (score rules) or 0/1 decision (decision rules).
double rule_fuse(std::span<const double> scores, const FusionRule& rule);

inline double rule_fuse(const ScoreVector& scores, const FusionRule& rule) {
  return rule_fuse(scores.values(), rule);
}

}  // namespace choquet
