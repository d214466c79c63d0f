#include "choquet/measures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "choquet/errors.hpp"

namespace choquet {

namespace {

constexpr double kAdditiveTolerance = 1e-12;
constexpr double kResidualTolerance = 1e-10;
constexpr int kBisectionBudget = 200;
constexpr std::size_t kMaxValidatedCriteria = 12;

// Elementary symmetric polynomials e_0..e_n of the densities.
std::vector<double> elementary_symmetric(std::span<const double> d) {
  std::vector<double> e(d.size() + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t k = i + 1; k > 0; --k) e[k] += e[k - 1] * d[i];
  }
  return e;
}

// (prod(1 + l m^i) - 1) / l - 1 = (e_1 - 1) + e_2 l + e_3 l^2 + ...
// Same roots as the residual except the trivial l = 0, and no cancellation
// when l is small.
double reduced_residual(std::span<const double> e, double l) {
  double acc = 0.0;
  for (std::size_t k = e.size() - 1; k >= 2; --k) acc = acc * l + e[k];
  return acc * l + (e[1] - 1.0);
}

}  // namespace

CriteriaSubset::CriteriaSubset(std::initializer_list<std::size_t> indices) {
  for (auto i : indices) *this = with(i);
}

CriteriaSubset CriteriaSubset::full(std::size_t n) {
  if (n > kMaxCriteria) throw InvalidArgument("too many criteria for a subset mask");
  return CriteriaSubset(n == kMaxCriteria ? ~std::uint32_t{0}
                                          : (std::uint32_t{1} << n) - 1);
}

CriteriaSubset CriteriaSubset::singleton(std::size_t index) {
  return CriteriaSubset{}.with(index);
}

CriteriaSubset CriteriaSubset::with(std::size_t index) const {
  if (index >= kMaxCriteria) throw InvalidArgument("criterion index out of range");
  return CriteriaSubset(mask_ | (std::uint32_t{1} << index));
}

CriteriaSubset CriteriaSubset::without(std::size_t index) const {
  if (index >= kMaxCriteria) throw InvalidArgument("criterion index out of range");
  return CriteriaSubset(mask_ & ~(std::uint32_t{1} << index));
}

std::vector<std::size_t> CriteriaSubset::indices() const {
  std::vector<std::size_t> out;
  for (std::uint32_t m = mask_; m != 0; m &= m - 1) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
  }
  return out;
}

std::string CriteriaSubset::to_string() const {
  std::string out = "{";
  bool first = true;
  for (auto i : indices()) {
    if (!first) out += ',';
    out += std::to_string(i);
    first = false;
  }
  return out + "}";
}

DensityVector::DensityVector(std::vector<double> densities)
    : values_(std::move(densities)) {
  if (values_.size() < 2) {
    throw InvalidArgument("a density vector needs at least two criteria");
  }
  if (values_.size() > kMaxCriteria) {
    throw InvalidArgument("a density vector supports at most 32 criteria");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double d = values_[i];
    if (!(d > 0.0 && d < 1.0)) {
      std::ostringstream msg;
      msg << "density " << i << " = " << d << " is outside (0, 1)";
      throw InvalidArgument(msg.str());
    }
  }
}

double DensityVector::sum() const {
  double s = 0.0;
  for (double d : values_) s += d;
  return s;
}

double lambda_residual(const DensityVector& densities, double lambda) {
  double prod = 1.0;
  for (double d : densities.values()) prod *= 1.0 + lambda * d;
  return prod - lambda - 1.0;
}

double solve_lambda(const DensityVector& densities) {
  const double excess = densities.sum() - 1.0;
  if (std::abs(excess) <= kAdditiveTolerance) return 0.0;

  const auto e = elementary_symmetric(densities.values());

  // reduced_residual is negative at the left end of the bracket and positive
  // at the right end in both cases.
  double lo = 0.0;
  double hi = 0.0;
  if (excess > 0.0) {
    lo = -1.0 + 1e-12;
    hi = 0.0;
  } else {
    hi = 1.0;
    while (reduced_residual(e, hi) < 0.0) {
      hi *= 2.0;
      if (!std::isfinite(hi)) throw NumericError("failed to bracket lambda");
    }
  }

  int iter = 0;
  for (; iter < kBisectionBudget; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (reduced_residual(e, mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  const double lambda = std::abs(reduced_residual(e, lo)) <=
                                std::abs(reduced_residual(e, hi))
                            ? lo
                            : hi;
  // The residual scales with lambda, so large roots get a relative bound.
  const double residual = lambda_residual(densities, lambda);
  if (std::abs(residual) > kResidualTolerance * std::max(1.0, std::abs(lambda))) {
    std::ostringstream msg;
    msg << "lambda did not converge after " << iter
        << " iterations (residual " << residual << ")";
    throw NumericError(msg.str());
  }
  return lambda;
}

LambdaMeasure::LambdaMeasure(DensityVector densities)
    : densities_(std::move(densities)), lambda_(solve_lambda(densities_)) {
  const std::size_t n = densities_.size();
  if (n <= kMaxTabulatedCriteria) {
    table_.assign(std::size_t{1} << n, 0.0);
    for (std::uint32_t mask = 1; mask < table_.size(); ++mask) {
      const auto low = static_cast<std::size_t>(std::countr_zero(mask));
      table_[mask] = combine(table_[mask & (mask - 1)], densities_[low]);
    }
  }
}

double LambdaMeasure::fold_mask(std::uint32_t mask) const {
  double value = 0.0;
  for (; mask != 0; mask &= mask - 1) {
    value = combine(value, densities_[static_cast<std::size_t>(std::countr_zero(mask))]);
  }
  return value;
}

double LambdaMeasure::operator()(CriteriaSubset subset) const {
  if (!subset.fits(size())) {
    throw InvalidArgument("subset " + subset.to_string() +
                          " names a criterion outside the measure");
  }
  if (!table_.empty()) return table_[subset.mask()];
  return fold_mask(subset.mask());
}

double LambdaMeasure::fold(std::span<const std::size_t> order) const {
  std::uint32_t seen = 0;
  double value = 0.0;
  for (auto i : order) {
    if (i >= size()) throw InvalidArgument("criterion index out of range");
    const std::uint32_t bit = std::uint32_t{1} << i;
    if (seen & bit) throw InvalidArgument("criterion repeated in fold order");
    seen |= bit;
    value = combine(value, densities_[i]);
  }
  return value;
}

double subset_measure(const LambdaMeasure& measure, CriteriaSubset subset) {
  return measure(subset);
}

TabulatedMeasure::TabulatedMeasure(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.size() < 2 || !std::has_single_bit(values_.size())) {
    throw InvalidArgument("a tabulated measure needs 2^n values");
  }
  n_ = static_cast<std::size_t>(std::countr_zero(values_.size()));
  if (n_ > kMaxTabulatedCriteria) {
    throw InvalidArgument("tabulated measures support at most 16 criteria");
  }
}

TabulatedMeasure TabulatedMeasure::from_map(
    const std::map<CriteriaSubset, double>& values) {
  std::uint32_t ground = 0;
  for (const auto& [subset, _] : values) ground |= subset.mask();
  const auto n = static_cast<std::size_t>(std::bit_width(ground));
  if (n > kMaxTabulatedCriteria) {
    throw InvalidArgument("tabulated measures support at most 16 criteria");
  }
  std::vector<double> table(std::size_t{1} << n);
  for (std::uint32_t mask = 0; mask < table.size(); ++mask) {
    auto it = values.find(CriteriaSubset(mask));
    if (it == values.end()) {
      throw InvalidArgument("measure has no value for subset " +
                            CriteriaSubset(mask).to_string());
    }
    table[mask] = it->second;
  }
  return TabulatedMeasure(std::move(table));
}

double TabulatedMeasure::operator()(CriteriaSubset subset) const {
  if (!subset.fits(n_)) {
    throw InvalidArgument("subset " + subset.to_string() +
                          " names a criterion outside the measure");
  }
  return values_[subset.mask()];
}

std::string MeasureViolation::describe() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::kEmptySetNotZero:
      out << "m({}) = " << smaller_value << ", expected 0";
      break;
    case Kind::kFullSetNotOne:
      out << "m(" << larger.to_string() << ") = " << larger_value
          << ", expected 1";
      break;
    case Kind::kNotMonotone:
      out << "m(" << smaller.to_string() << ") = " << smaller_value << " > m("
          << larger.to_string() << ") = " << larger_value;
      break;
  }
  return out.str();
}

std::vector<MeasureViolation> validate_measure(const TabulatedMeasure& measure,
                                               double tolerance) {
  const std::size_t n = measure.size();
  if (n > kMaxValidatedCriteria) {
    throw InvalidArgument("validate_measure supports at most 12 criteria");
  }
  const auto values = measure.values();
  const auto full = CriteriaSubset::full(n);
  std::vector<MeasureViolation> out;

  if (std::abs(values[0]) > tolerance) {
    out.push_back({MeasureViolation::Kind::kEmptySetNotZero, CriteriaSubset{},
                   CriteriaSubset{}, values[0], values[0]});
  }
  if (std::abs(values[full.mask()] - 1.0) > tolerance) {
    out.push_back({MeasureViolation::Kind::kFullSetNotOne, full, full,
                   values[full.mask()], values[full.mask()]});
  }
  for (std::uint32_t mask = 0; mask < values.size(); ++mask) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::uint32_t bit = std::uint32_t{1} << j;
      if (mask & bit) continue;
      const double a = values[mask];
      const double b = values[mask | bit];
      if (a > b + tolerance) {
        out.push_back({MeasureViolation::Kind::kNotMonotone,
                       CriteriaSubset(mask), CriteriaSubset(mask | bit), a, b});
      }
    }
  }
  return out;
}

std::vector<MeasureViolation> validate_measure(
    const std::map<CriteriaSubset, double>& values, double tolerance) {
  return validate_measure(TabulatedMeasure::from_map(values), tolerance);
}

}  // namespace choquet
