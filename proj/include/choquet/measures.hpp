#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace choquet {

/// Upper bound on the number of criteria a subset bitmask can hold.
inline constexpr std::size_t kMaxCriteria = 32;

/// Criterion counts up to this size get a precomputed power-set table.
inline constexpr std::size_t kMaxTabulatedCriteria = 16;

/// A subset of criteria {0, ..., n-1}, stored as a bitmask.
class CriteriaSubset {
 public:
  constexpr CriteriaSubset() = default;
  constexpr explicit CriteriaSubset(std::uint32_t mask) : mask_(mask) {}
  CriteriaSubset(std::initializer_list<std::size_t> indices);

  static CriteriaSubset full(std::size_t n);
  static CriteriaSubset singleton(std::size_t index);

  constexpr std::uint32_t mask() const { return mask_; }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr std::size_t count() const {
    return static_cast<std::size_t>(std::popcount(mask_));
  }
  constexpr bool contains(std::size_t index) const {
    return index < kMaxCriteria && ((mask_ >> index) & 1u) != 0;
  }
  /// True when every member index is below n.
  constexpr bool fits(std::size_t n) const {
    return n >= kMaxCriteria || (mask_ >> n) == 0;
  }
  constexpr bool is_subset_of(CriteriaSubset other) const {
    return (mask_ & ~other.mask_) == 0;
  }

  CriteriaSubset with(std::size_t index) const;
  CriteriaSubset without(std::size_t index) const;
  std::vector<std::size_t> indices() const;

  /// "{0,2}" style rendering with zero-based indices.
  std::string to_string() const;

  friend constexpr auto operator<=>(CriteriaSubset, CriteriaSubset) = default;

 private:
  std::uint32_t mask_ = 0;
};

/// Singleton densities m^i of a lambda-measure. Every density lies strictly
/// inside (0, 1) and there are at least two criteria.
class DensityVector {
 public:
  explicit DensityVector(std::vector<double> densities);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }
  double sum() const;

  friend bool operator==(const DensityVector&, const DensityVector&) = default;

 private:
  std::vector<double> values_;
};

/// Root lambda > -1 (lambda != 0 unless the densities sum to one) of
///
///   prod_i (1 + lambda * m^i) = 1 + lambda.
///
/// The root is bracketed by the sign of sum(m^i) - 1 and bisected to machine
/// precision. Throws NumericError when the residual stays above tolerance.
double solve_lambda(const DensityVector& densities);

/// Residual prod_i (1 + lambda * m^i) - lambda - 1.
double lambda_residual(const DensityVector& densities, double lambda);

/// Sugeno lambda-measure built from singleton densities.
///
/// Immutable after construction. For n <= kMaxTabulatedCriteria the whole
/// power set is tabulated up front; larger measures fold on demand.
class LambdaMeasure {
 public:
  explicit LambdaMeasure(DensityVector densities);

  std::size_t size() const { return densities_.size(); }
  double lambda() const { return lambda_; }
  const DensityVector& densities() const { return densities_; }

  /// m(A). Throws InvalidArgument if A names a criterion >= size().
  double operator()(CriteriaSubset subset) const;

  /// m({order[0], order[1], ...}) folded with the lambda rule in exactly the
  /// given insertion order. Indices must be distinct and < size().
  double fold(std::span<const std::size_t> order) const;

  /// Lambda union rule: m(A u B) = m(A) + m(B) + lambda m(A) m(B) for
  /// disjoint A, B.
  double combine(double a, double b) const { return a + b + lambda_ * a * b; }

 private:
  double fold_mask(std::uint32_t mask) const;

  DensityVector densities_;
  double lambda_ = 0.0;
  std::vector<double> table_;
};

double subset_measure(const LambdaMeasure& measure, CriteriaSubset subset);

/// Fuzzy measure given explicitly on every subset of n criteria. Used for
/// measures outside the lambda family (max, min, hand-built tables).
class TabulatedMeasure {
 public:
  /// values[mask] = m(CriteriaSubset(mask)); values.size() must be 2^n.
  explicit TabulatedMeasure(std::vector<double> values);
  static TabulatedMeasure from_map(const std::map<CriteriaSubset, double>& values);

  std::size_t size() const { return n_; }
  double operator()(CriteriaSubset subset) const;
  std::span<const double> values() const { return values_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

/// A broken boundary or monotonicity condition.
struct MeasureViolation {
  enum class Kind { kEmptySetNotZero, kFullSetNotOne, kNotMonotone };

  Kind kind;
  CriteriaSubset smaller;  // A (or the offending boundary set)
  CriteriaSubset larger;   // B with A a proper subset of B
  double smaller_value = 0.0;
  double larger_value = 0.0;

  std::string describe() const;
};

/// Checks m(empty) = 0, m(full) = 1 and m(A) <= m(B) for every A subset of B.
/// Monotonicity is tested on covering pairs (B = A plus one criterion), which
/// implies it for all pairs. Throws InvalidArgument if any subset of the
/// inferred ground set is missing or the ground set exceeds 12 criteria.
std::vector<MeasureViolation> validate_measure(
    const std::map<CriteriaSubset, double>& values, double tolerance = 1e-12);

std::vector<MeasureViolation> validate_measure(const TabulatedMeasure& measure,
                                               double tolerance = 1e-12);

}  // namespace choquet
