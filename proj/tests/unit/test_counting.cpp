#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fnls/counting.hpp"
#include "fnls/norms.hpp"
#include "fnls/spectral_field.hpp"

using namespace fnls;

namespace {

constexpr double kPi = std::numbers::pi;

double phi_oracle(long long k1, long long k2, long long k3, double a) {
  auto p = [a](long long k) { return std::pow(static_cast<double>(std::llabs(k)), a); };
  return p(k1) - p(k2) + p(k3) - p(k1 - k2 + k3);
}

// brute force over the shell with an explicit window
long long levelset_oracle(const LevelSetQuery& q) {
  long long c = 0;
  for (long long k1 = -2 * q.N; k1 <= 2 * q.N; ++k1) {
    if (2 * std::llabs(k1) <= q.N) continue;
    if (q.regime == Regime::HHH && k1 == q.k2) continue;
    if (std::abs(phi_oracle(k1, q.k2, q.k3, q.alpha) - q.mu) <= std::pow(static_cast<double>(q.N), q.eps)) ++c;
  }
  return c;
}

// sup over windows anchored at each attained value
long long sup_oracle(const std::vector<double>& v, double width) {
  long long best = 0;
  for (double lo : v) {
    long long c = 0;
    for (double x : v) c += x >= lo && x <= lo + width;
    best = std::max(best, c);
  }
  return best;
}

// int <y-x>^{-s} <y>^{-b} dy: split at x/2, substitute y = sinh u around 0 and
// y = x + sinh u around x, Simpson in u
double convolution_oracle(double s, double b, double x) {
  auto f = [&](double y) { return std::pow(1 + (y - x) * (y - x), -s / 2) * std::pow(1 + y * y, -b / 2); };
  const double U = 60.0 / (s + b - 1.0);
  auto simpson = [&](auto g, double a, double c) {
    const int n = 400000;
    const double h = (c - a) / n;
    double acc = g(a) + g(c);
    for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * g(a + i * h);
    return acc * h / 3.0;
  };
  const double m = x / 2;
  const double left = simpson([&](double u) { return f(std::sinh(u)) * std::cosh(u); }, -U, std::asinh(m));
  const double right = simpson([&](double u) { return f(x + std::sinh(u)) * std::cosh(u); }, std::asinh(m - x), U);
  return left + right;
}

double chi_pow4_integral() {
  const int n = 20000;
  const double h = 1.0 / n;
  double acc = 1.0 + std::pow(chi(1.0), 4);
  for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * std::pow(chi(i * h), 4);
  return 2.0 * acc * h / 3.0;
}

double weighted_chi_l2(double b) {
  auto chi_hat = [](double l) {
    const int n = 4000;
    const double h = 1.0 / n;
    double acc = 1.0 + chi(1.0) * std::cos(l);
    for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * chi(i * h) * std::cos(l * i * h);
    return 2.0 * acc * h / 3.0;
  };
  const double dl = 0.05;
  double acc = 0.0;
  for (double l = 0.0; l <= 400.0; l += dl) {
    const double c = chi_hat(l);
    acc += (l == 0.0 ? 1.0 : 2.0) * c * c * std::pow(1 + l * l, b) * dl;
  }
  return std::sqrt(acc);
}

}  // namespace

TEST(CountingPrinciple, Squares) {
  std::vector<double> v;
  for (int k = 1; k <= 100; ++k) v.push_back(static_cast<double>(k) * k);
  const auto r = counting_principle_check(v, 0, 2500, 2.0);
  EXPECT_EQ(r.count, 50);
  EXPECT_DOUBLE_EQ(r.bound, 1251.0);
}

TEST(CountingPrinciple, PointAndEmpty) {
  std::vector<double> v;
  for (int k = 0; k <= 10; ++k) v.push_back(k);
  const auto r = counting_principle_check(v, 3, 3, 1.0);
  EXPECT_EQ(r.count, 1);
  EXPECT_DOUBLE_EQ(r.bound, 1.0);
  EXPECT_EQ(counting_principle_check(v, 5, 4, 1.0).count, 0);
}

TEST(LevelSet, QuadraticExample) {
  LevelSetQuery q{256, 3, 7, 0.0, 0.25, 2.0, Regime::HLL};
  const auto r = levelset_count(q);
  EXPECT_EQ(r.count, levelset_oracle(q));
  EXPECT_NEAR(r.bound, std::pow(256.0, 0.25) * (1 + 1 / std::sqrt(17.0)), 1e-12);
  // Phi = -2(k1 - 3)(7 - 3), so |Phi| <= 4 only at k1 = 3, far below the shell
  EXPECT_EQ(r.count, 0);
  q.mu = -8.0 * (200 - 3);
  EXPECT_EQ(levelset_count(q).count, levelset_oracle(q));
  EXPECT_EQ(levelset_count(q).count, 1);
  EXPECT_LE(levelset_count(q).count, 1 + levelset_count(q).bound);
}

TEST(LevelSet, FarLevelIsEmpty) {
  LevelSetQuery q{128, 2, -5, 1e9, 0.1, 1.5, Regime::HLL};
  EXPECT_EQ(levelset_count(q).count, 0);
}

TEST(LevelSet, MatchesBruteForce) {
  for (double a : {1.1, 1.5, 2.0})
    for (long long k3 : {-7LL, 1LL, 6LL})
      for (double mu : {-300.0, -20.0, 0.0, 13.5, 400.0}) {
        LevelSetQuery hll{64, 2, k3, mu, 0.3, a, Regime::HLL};
        EXPECT_EQ(levelset_count(hll).count, levelset_oracle(hll));
        LevelSetQuery hhh{64, 40, -70 - k3, mu, 0.3, a, Regime::HHH};
        EXPECT_EQ(levelset_count(hhh).count, levelset_oracle(hhh));
      }
}

TEST(LevelSet, SupOverMuIsExact) {
  for (double a : {1.1, 1.5, 2.0}) {
    LevelSetQuery q{64, 3, -5, 0.0, 0.1, a, Regime::HLL};
    std::vector<double> v;
    for (long long k1 : levelset_shell(q)) v.push_back(resonance_phi(k1, q.k2, q.k3, a));
    std::reverse(v.begin(), v.end());
    const auto r = levelset_sup_over_mu(q);
    EXPECT_EQ(r.count, sup_oracle(v, 2 * std::pow(64.0, 0.1))) << a;
  }
}

TEST(LevelSet, Validation) {
  EXPECT_THROW(levelset_count({64, 3, 3, 0, 0.1, 1.5, Regime::HLL}), InvalidArgument);
  EXPECT_THROW(levelset_count({16, 3, 1, 0, 0.1, 1.5, Regime::HLL}), InvalidArgument);
  EXPECT_THROW(levelset_count({16, 3, 20, 0, 0.1, 1.5, Regime::HHH}), InvalidArgument);
  const auto shell = levelset_shell({8, 10, 12, 0, 0.1, 1.5, Regime::HHH});
  EXPECT_EQ(std::count(shell.begin(), shell.end(), 10LL), 0);
  EXPECT_EQ(shell.size(), 2u * 12 - 1);
}

TEST(PairLevelSet, QuadraticExample) {
  const auto r = pair_levelset_count({0, 450.0, 10, 10, 10.0, 2.0});
  EXPECT_EQ(r.count, 2);
  EXPECT_NEAR(r.bound, std::sqrt(10.0), 1e-12);
  EXPECT_EQ(pair_levelset_count({0, 10000.0, 10, 10, 10.0, 2.0}).count, 0);
  EXPECT_THROW(pair_levelset_count({0, 450.0, 10, 10, 0.001, 2.0}), InvalidArgument);
}

TEST(PairLevelSet, SweepConstantStable) {
  std::vector<double> c;
  for (long long M = 16; M <= 512; M *= 2) c.push_back(pair_sweep(1.5, M, 200, 3).constant);
  for (std::size_t i = 1; i < c.size(); ++i) EXPECT_LT(c[i] / c[i - 1], 1.5) << i;
  EXPECT_LT(*std::max_element(c.begin(), c.end()), 20.0);
}

TEST(LevelSetSweep, Reproducible) {
  const auto a = levelset_sweep(1.5, 64, 0.1, Regime::HLL, 50, 9);
  const auto b = levelset_sweep(1.5, 64, 0.1, Regime::HLL, 50, 9);
  ASSERT_EQ(a.records.size(), 50u);
  for (std::size_t i = 0; i < 50; ++i) {
    EXPECT_EQ(a.records[i].params, b.records[i].params);
    EXPECT_EQ(a.records[i].result.count, b.records[i].result.count);
  }
  EXPECT_EQ(a.constant, b.constant);
}

TEST(Convolution, GammaCases) {
  EXPECT_DOUBLE_EQ(convolution_gamma(1.0, 1.0, 0.1), 0.9);
  EXPECT_DOUBLE_EQ(convolution_gamma(0.75, 2.0, 0.1), 0.75);
  EXPECT_NEAR(convolution_gamma(0.6, 0.6, 0.1), 0.2, 1e-15);
}

TEST(Convolution, IntegralMatchesOracle) {
  for (auto [s, b] : {std::pair{1.0, 1.0}, {0.75, 2.0}, {0.6, 0.6}, {2.0, 2.0}})
    for (double x : {0.0, 3.0, 100.0, 1e4}) {
      const double want = convolution_oracle(s, b, x);
      EXPECT_NEAR(convolution_integral(s, b, x) / want, 1.0, 1e-6) << s << ' ' << b << ' ' << x;
    }
  // Cauchy kernels convolve in closed form
  for (double x : {0.0, 1.0, 50.0}) EXPECT_NEAR(convolution_integral(2, 2, x), 2 * kPi / (x * x + 4), 1e-10);
}

TEST(Convolution, SlopeNearBoundExponent) {
  const auto grid = log_grid(10, 1e4, 31);
  const auto f1 = convolution_bound_check(1.0, 1.0, grid, 0.1);
  EXPECT_NEAR(f1.slope, -f1.gamma, 0.1);
  // log<x>/<x> decay flattens the log-log slope at finite x
  EXPECT_GT(f1.slope, -1.0);
  const auto f2 = convolution_bound_check(0.75, 2.0, grid, 0.1);
  EXPECT_NEAR(f2.slope, -0.75, 0.1);
  const auto f3 = convolution_bound_check(0.6, 0.6, grid, 0.1);
  EXPECT_NEAR(f3.slope, -0.2, 0.1);
  EXPECT_EQ(f3.points.size(), 31u);
}

TEST(Strichartz, SingleModeRatio) {
  const auto e1 = SpectralField::mode(1.5, 1, 1);
  const double want = std::sqrt(2 * kPi * chi_pow4_integral()) / std::pow(weighted_chi_l2(0.375), 2);
  EXPECT_NEAR(bilinear_strichartz_ratio(e1, e1, 1.0, 0.3) / want, 1.0, 1e-4);
}

TEST(Strichartz, ZeroFactor) {
  const auto e1 = SpectralField::mode(1.5, 1, 1);
  EXPECT_EQ(bilinear_strichartz_ratio(e1, SpectralField(1.5, 1), 1.0, 0.3), 0.0);
}

TEST(Strichartz, RatioStatistics) {
  const auto r = strichartz_ratio(16, 16, 1.5, 0.5 - 1.5 / 4 + 0.05, 10, 4);
  EXPECT_EQ(r.samples, 10u);
  EXPECT_GT(r.max_ratio, 0.0);
  EXPECT_LE(r.mean_ratio, r.max_ratio);
  EXPECT_THROW(strichartz_ratio(8, 16, 1.5, 0.2, 1, 1), InvalidArgument);
}
