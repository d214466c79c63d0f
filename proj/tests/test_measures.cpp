#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "choquet/errors.hpp"
#include "choquet/measures.hpp"
#include "oracle.hpp"

using namespace choquet;

namespace {

std::vector<double> random_densities(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> d(n);
  for (auto& x : d) {
    do {
      x = unit(rng);
    } while (x <= 0.0);
  }
  return d;
}

}  // namespace

TEST(SolveLambda, WorkedExample) {
  const double l = solve_lambda(DensityVector({0.35, 0.25, 0.3}));
  EXPECT_NEAR(l, 0.361, 5e-4);
  EXPECT_NEAR(l, oracle::lambda3({0.35, 0.25, 0.3}), 1e-12);
}

TEST(SolveLambda, AdditiveDensitiesGiveExactlyZero) {
  EXPECT_EQ(solve_lambda(DensityVector({0.5, 0.5})), 0.0);
  EXPECT_EQ(solve_lambda(DensityVector({0.2, 0.3, 0.5})), 0.0);
}

TEST(SolveLambda, OptimalSolutionDensitiesMatchPairwiseBackSolve) {
  const std::array<double, 3> m{0.411, 0.547, 0.362};
  const double l = solve_lambda(DensityVector({m.begin(), m.end()}));
  // Pairwise measures 0.820 (12), 0.682 (13), 0.788 (23), each back-solved
  // from m_ij = m_i + m_j + l m_i m_j.
  const double l12 = (0.820 - m[0] - m[1]) / (m[0] * m[1]);
  const double l13 = (0.682 - m[0] - m[2]) / (m[0] * m[2]);
  const double l23 = (0.788 - m[1] - m[2]) / (m[1] * m[2]);
  EXPECT_NEAR(l12, l13, 5e-3);
  EXPECT_NEAR(l12, l23, 5e-3);
  EXPECT_NEAR(l13, l23, 5e-3);
  EXPECT_NEAR(l, -0.612, 5e-3);
  EXPECT_NEAR(l, oracle::lambda3(m), 1e-12);
  for (double estimate : {l12, l13, l23}) EXPECT_NEAR(l, estimate, 5e-3);
}

TEST(SolveLambda, TwoCriteriaClosedForm) {
  for (auto [a, b] : {std::pair{0.1, 0.2}, {0.7, 0.6}, {0.01, 0.02}, {0.99, 0.98}}) {
    EXPECT_NEAR(solve_lambda(DensityVector({a, b})), oracle::lambda2(a, b),
                1e-9 * std::max(1.0, std::abs(oracle::lambda2(a, b))));
  }
}

TEST(SolveLambda, RandomDensitiesSatisfyResidualAndSignContract) {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 7);
    const DensityVector d(random_densities(rng, n));
    const double l = solve_lambda(d);
    EXPECT_GT(l, -1.0);
    EXPECT_LE(std::abs(lambda_residual(d, l)), 1e-10)
        << "trial " << trial;
    if (d.sum() < 1.0 - 1e-12) EXPECT_GT(l, 0.0);
    if (d.sum() > 1.0 + 1e-12) EXPECT_LT(l, 0.0);
    if (n == 3) {
      EXPECT_NEAR(l, oracle::lambda3({d[0], d[1], d[2]}), 1e-8 * std::max(1.0, l));
    }
  }
}

TEST(SolveLambda, ModerateDensitiesMeetAbsoluteResidual) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unit(0.05, 0.95);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> v(2 + trial % 7);
    for (auto& x : v) x = unit(rng);
    const DensityVector d(v);
    EXPECT_LE(std::abs(lambda_residual(d, solve_lambda(d))), 1e-10);
  }
}

TEST(DensityVector, RejectsInvalidInput) {
  EXPECT_THROW(DensityVector({0.5}), InvalidArgument);
  EXPECT_THROW(DensityVector({}), InvalidArgument);
  EXPECT_THROW(DensityVector({0.0, 0.5}), InvalidArgument);
  EXPECT_THROW(DensityVector({1.0, 0.5}), InvalidArgument);
  EXPECT_THROW(DensityVector({-0.1, 0.5}), InvalidArgument);
  EXPECT_THROW(DensityVector({std::nan(""), 0.5}), InvalidArgument);
  EXPECT_NO_THROW(DensityVector({1e-6, 1.0 - 1e-6}));
}

TEST(SubsetMeasure, WorkedExampleTable) {
  const LambdaMeasure m(DensityVector({0.35, 0.25, 0.3}));
  EXPECT_EQ(subset_measure(m, {}), 0.0);
  EXPECT_DOUBLE_EQ(subset_measure(m, {0}), 0.35);
  EXPECT_DOUBLE_EQ(subset_measure(m, {1}), 0.25);
  EXPECT_DOUBLE_EQ(subset_measure(m, {2}), 0.3);
  const std::vector<double> d{0.35, 0.25, 0.3};
  const double l = oracle::lambda3({0.35, 0.25, 0.3});
  // The reference table lists 0.631 / 0.687 / 0.577: the exact values
  // truncated (not rounded) to three decimals.
  const struct {
    CriteriaSubset s;
    double printed;
  } pairs[] = {{{0, 1}, 0.631}, {{0, 2}, 0.687}, {{1, 2}, 0.577}};
  for (const auto& [s, printed] : pairs) {
    const double v = subset_measure(m, s);
    EXPECT_NEAR(v, oracle::measure(d, l, s.mask()), 1e-12) << s.to_string();
    EXPECT_EQ(std::floor(v * 1000.0) / 1000.0, printed) << s.to_string();
  }
  EXPECT_NEAR(subset_measure(m, {1, 2}), 0.577, 5e-4);
  EXPECT_NEAR(subset_measure(m, {0, 1, 2}), 1.0, 1e-9);
}

TEST(SubsetMeasure, MatchesProductFormula) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto d = random_densities(rng, 2 + trial % 6);
    const LambdaMeasure m{DensityVector(d)};
    for (unsigned mask = 0; mask < (1u << d.size()); ++mask) {
      EXPECT_NEAR(m(CriteriaSubset(mask)), oracle::measure(d, m.lambda(), mask), 1e-9);
    }
  }
}

TEST(SubsetMeasure, FullSetIsOne) {
  std::mt19937_64 rng(11);
  for (std::size_t n : {2u, 3u, 5u, 8u, 12u, 16u, 17u, 20u, 32u}) {
    const LambdaMeasure m{DensityVector(random_densities(rng, n))};
    EXPECT_NEAR(m(CriteriaSubset::full(n)), 1.0, 1e-9) << "n = " << n;
  }
}

TEST(SubsetMeasure, NearAdditiveStillNormalized) {
  const LambdaMeasure m(DensityVector({0.3, 0.3, 0.4 - 1e-10}));
  EXPECT_NEAR(m(CriteriaSubset::full(3)), 1.0, 1e-9);
  EXPECT_GT(m.lambda(), 0.0);
}

TEST(SubsetMeasure, RejectsOutOfRangeIndex) {
  const LambdaMeasure m(DensityVector({0.35, 0.25, 0.3}));
  EXPECT_THROW(m(CriteriaSubset{3}), InvalidArgument);
  const std::vector<std::size_t> bad{0, 5};
  EXPECT_THROW(m.fold(bad), InvalidArgument);
  const std::vector<std::size_t> repeated{1, 1};
  EXPECT_THROW(m.fold(repeated), InvalidArgument);
}

TEST(SubsetMeasure, FoldOrderDoesNotMatter) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 6);
    const LambdaMeasure m{DensityVector(random_densities(rng, n))};
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    const double reference = m.fold(order);
    EXPECT_NEAR(reference, m(CriteriaSubset::full(n)), 1e-12);
    for (int shuffle = 0; shuffle < 10; ++shuffle) {
      std::shuffle(order.begin(), order.end(), rng);
      // Any prefix, inserted in shuffled order, matches the table.
      for (std::size_t k = 1; k <= n; ++k) {
        CriteriaSubset s;
        for (std::size_t i = 0; i < k; ++i) s = s.with(order[i]);
        EXPECT_NEAR(m.fold(std::span(order).first(k)), m(s), 1e-12);
      }
    }
  }
}

TEST(SubsetMeasure, AdditiveDegeneracyIsExactSum) {
  const std::vector<double> d{0.25, 0.25, 0.125, 0.375};
  const LambdaMeasure m{DensityVector(d)};
  ASSERT_EQ(m.lambda(), 0.0);
  for (unsigned mask = 0; mask < 16; ++mask) {
    double sum = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      if (mask & (1u << i)) sum += d[i];
    }
    EXPECT_EQ(m(CriteriaSubset(mask)), sum);
  }
}

TEST(SubsetMeasure, MonotoneOverExhaustivePowerSets) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 7);  // n <= 8
    const LambdaMeasure m{DensityVector(random_densities(rng, n))};
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      for (std::size_t j = 0; j < n; ++j) {
        const CriteriaSubset a(mask);
        EXPECT_LE(m(a), m(a.with(j)) + 1e-12);
      }
      EXPECT_GE(m(CriteriaSubset(mask)), 0.0);
      EXPECT_LE(m(CriteriaSubset(mask)), 1.0 + 1e-9);
    }
  }
}

TEST(SubsetMeasure, MonotoneAlongSampledChainsForLargeN) {
  std::mt19937_64 rng(8);
  const std::size_t n = 20;  // above the tabulation limit
  for (int trial = 0; trial < 20; ++trial) {
    const LambdaMeasure m{DensityVector(random_densities(rng, n))};
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    CriteriaSubset s;
    double previous = 0.0;
    for (auto i : order) {
      s = s.with(i);
      const double value = m(s);
      EXPECT_LE(previous, value + 1e-12);
      previous = value;
    }
    EXPECT_NEAR(previous, 1.0, 1e-9);
  }
}

TEST(SubsetMeasure, OnDemandMatchesTabulated) {
  std::mt19937_64 rng(13);
  auto d = random_densities(rng, 17);
  const LambdaMeasure big{DensityVector(d)};
  for (unsigned mask : {0u, 1u, 0x3u, 0xFFFFu, 0x1FFFFu, 0x10001u}) {
    EXPECT_NEAR(big(CriteriaSubset(mask)), oracle::measure(d, big.lambda(), mask), 1e-9);
  }
}

TEST(CriteriaSubset, BasicOperations) {
  const CriteriaSubset s{0, 2};
  EXPECT_EQ(s.mask(), 0b101u);
  EXPECT_EQ(s.count(), 2u);
  EXPECT_TRUE(s.contains(2));
  EXPECT_FALSE(s.contains(1));
  EXPECT_TRUE(s.is_subset_of(CriteriaSubset::full(3)));
  EXPECT_FALSE(s.fits(2));
  EXPECT_TRUE(s.fits(3));
  EXPECT_EQ(s.to_string(), "{0,2}");
  EXPECT_EQ(s.without(0), CriteriaSubset::singleton(2));
  EXPECT_THROW(CriteriaSubset::singleton(32), InvalidArgument);
  EXPECT_EQ(CriteriaSubset::full(32).count(), 32u);
}

TEST(ValidateMeasure, WorkedExampleTableIsValid) {
  const std::map<CriteriaSubset, double> values{
      {CriteriaSubset{}, 0.0},         {CriteriaSubset{0}, 0.35},
      {CriteriaSubset{1}, 0.25},       {CriteriaSubset{2}, 0.3},
      {CriteriaSubset{0, 1}, 0.631},   {CriteriaSubset{0, 2}, 0.687},
      {CriteriaSubset{1, 2}, 0.577},   {CriteriaSubset{0, 1, 2}, 1.0}};
  EXPECT_TRUE(validate_measure(values).empty());
}

TEST(ValidateMeasure, MonotoneByInspection) {
  const std::map<CriteriaSubset, double> values{{CriteriaSubset{}, 0.0},
                                                {CriteriaSubset{0}, 0.6},
                                                {CriteriaSubset{1}, 0.5},
                                                {CriteriaSubset{0, 1}, 1.0}};
  EXPECT_TRUE(validate_measure(values).empty());
}

TEST(ValidateMeasure, ReportsTheOffendingPair) {
  const std::map<CriteriaSubset, double> values{{CriteriaSubset{}, 0.0},
                                                {CriteriaSubset{0}, 0.7},
                                                {CriteriaSubset{1}, 0.1},
                                                {CriteriaSubset{0, 1}, 0.5}};
  const auto violations = validate_measure(values);
  ASSERT_EQ(violations.size(), 2u);
  // m({0,1}) = 0.5 is also not 1; the monotonicity break is the other entry.
  const auto it = std::find_if(violations.begin(), violations.end(), [](const auto& v) {
    return v.kind == MeasureViolation::Kind::kNotMonotone;
  });
  ASSERT_NE(it, violations.end());
  EXPECT_EQ(it->smaller, (CriteriaSubset{0}));
  EXPECT_EQ(it->larger, (CriteriaSubset{0, 1}));
  EXPECT_NE(it->describe().find("{0}"), std::string::npos);
  EXPECT_EQ(std::count_if(violations.begin(), violations.end(),
                          [](const auto& v) {
                            return v.kind == MeasureViolation::Kind::kNotMonotone;
                          }),
            1);
}

TEST(ValidateMeasure, BoundaryViolations) {
  const std::map<CriteriaSubset, double> values{{CriteriaSubset{}, 0.1},
                                                {CriteriaSubset{0}, 0.4},
                                                {CriteriaSubset{1}, 0.5},
                                                {CriteriaSubset{0, 1}, 0.9}};
  const auto violations = validate_measure(values);
  ASSERT_EQ(violations.size(), 2u);
  EXPECT_EQ(violations[0].kind, MeasureViolation::Kind::kEmptySetNotZero);
  EXPECT_EQ(violations[1].kind, MeasureViolation::Kind::kFullSetNotOne);
}

TEST(ValidateMeasure, MissingEntriesAreAnError) {
  const std::map<CriteriaSubset, double> values{
      {CriteriaSubset{}, 0.0}, {CriteriaSubset{0}, 0.5}, {CriteriaSubset{0, 1}, 1.0}};
  EXPECT_THROW(validate_measure(values), InvalidArgument);
}

TEST(ValidateMeasure, LambdaMeasuresAlwaysPass) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 9);
    const LambdaMeasure m{DensityVector(random_densities(rng, n))};
    std::vector<double> table(std::size_t{1} << n);
    for (unsigned mask = 0; mask < table.size(); ++mask) table[mask] = m(CriteriaSubset(mask));
    EXPECT_TRUE(validate_measure(TabulatedMeasure(table), 1e-9).empty());
  }
}

TEST(TabulatedMeasure, RejectsBadSizes) {
  EXPECT_THROW(TabulatedMeasure({0.0, 0.5, 1.0}), InvalidArgument);
  EXPECT_THROW(TabulatedMeasure({}), InvalidArgument);
  const TabulatedMeasure m({0.0, 0.3, 0.6, 1.0});
  EXPECT_EQ(m.size(), 2u);
  EXPECT_DOUBLE_EQ(m(CriteriaSubset{1}), 0.6);
  EXPECT_THROW(m(CriteriaSubset{2}), InvalidArgument);
}
