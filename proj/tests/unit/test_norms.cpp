#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fnls/dynamics.hpp"
#include "fnls/norms.hpp"
#include "fnls/random_data.hpp"
#include "fnls/stats.hpp"

using namespace fnls;

namespace {

constexpr double kPi = std::numbers::pi;

double bracket(double x) { return std::sqrt(1.0 + x * x); }

// int chi(t/T) cos(lambda t) dt by Simpson on [-T, T]; chi is even so the
// transform is real
double chi_hat_oracle(double lambda, double T) {
  const int m = 4000;
  const double h = T / m;
  auto f = [&](double t) { return chi(t / T) * std::cos(lambda * t); };
  double s = f(0.0) + f(T);
  for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return 2.0 * s * h / 3.0;
}

// int <lambda + shift>^{2b} |chi_hat(lambda)|^2 dlambda, trapezoid on a wide grid
double weighted_chi_l2(double b, double T, double shift = 0.0) {
  const double dl = 0.05 / T, lmax = 400.0 / T;
  double s = 0.0;
  for (double l = 0.0; l <= lmax; l += dl) {
    const double c = chi_hat_oracle(l, T);
    const double w = l == 0.0 ? 0.5 : 1.0;
    s += w * c * c * (std::pow(bracket(l + shift), 2 * b) + std::pow(bracket(-l + shift), 2 * b)) * dl;
  }
  return std::sqrt(s);
}

double weighted_chi_lq(double weight_exp, double q, double T) {
  const double dl = 0.05 / T, lmax = 400.0 / T;
  double s = 0.0;
  for (double l = 0.0; l <= lmax; l += dl) {
    const double c = std::abs(chi_hat_oracle(l, T));
    s += (l == 0.0 ? 1.0 : 2.0) * std::pow(std::pow(bracket(l), weight_exp) * c, q) * dl;
  }
  return std::pow(s, 1.0 / q);
}

Trajectory constant_trajectory(const SpectralField& u, double dt, std::size_t steps) {
  return Trajectory{std::vector(steps + 1, u), 0.0, dt, Variant::Derived};
}

KernelTrajectory smooth_random_kernel(std::mt19937_64& rng, int N, double alpha, double dt, std::size_t steps) {
  std::normal_distribution<double> g;
  KernelTrajectory K;
  K.N = Dyadic::of(N);
  K.alpha = alpha;
  K.dt = dt;
  K.columns = K.N.shell_modes();
  const auto rows = 2 * N + 1;
  const auto cols = static_cast<Eigen::Index>(K.columns.size());
  Eigen::MatrixXcd A(rows, cols), B(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) {
      A(r, c) = {g(rng), g(rng)};
      B(r, c) = {g(rng), g(rng)};
    }
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = dt * static_cast<double>(i);
    Eigen::MatrixXcd H = A + t * B;
    for (Eigen::Index r = 0; r < rows; ++r) H.row(r) *= std::polar(1.0, t * abs_pow(r - N, alpha));
    K.samples.push_back(std::move(H));
  }
  return K;
}

}  // namespace

TEST(Sobolev, Values) {
  for (double s : {-1.0, 0.0, 0.7, 3.0}) EXPECT_DOUBLE_EQ(sobolev_norm(SpectralField::mode(1.5, 3, 0), s), 1.0);
  EXPECT_NEAR(sobolev_norm(SpectralField::mode(1.5, 3, 1), 1.0), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(sobolev_norm(SpectralField::mode(1.5, 3, 2, 3.0), 0.0), 3.0, 1e-15);
}

TEST(FourierLebesgue, Values) {
  for (int k : {0, 2, -5})
    EXPECT_NEAR(fl_norm(SpectralField::mode(1.5, 6, k), 0.8, kInf), std::pow(bracket(k), 0.8), 1e-14);
  EXPECT_DOUBLE_EQ(fl_norm(SpectralField::mode(1.5, 2, 0) + SpectralField::mode(1.5, 2, 1), 0.0, 1.0), 2.0);
  EXPECT_EQ(fl_norm(SpectralField(1.5, 4), 0.3, 2.0), 0.0);
  EXPECT_EQ(fl_norm(SpectralField(1.5, 4), 0.3, kInf), 0.0);
}

TEST(MixedNorm, Values) {
  EXPECT_NEAR(mixed_norm(constant_trajectory(SpectralField::mode(1.5, 2, 0), 0.01, 100), 4, kInf, 0, 1), 1.0, 1e-12);

  const auto e1 = linear_trajectory(SpectralField::mode(1.5, 2, 1), 0.0, 0.01, 100);
  EXPECT_NEAR(mixed_norm(e1, 4, kInf, 0, 1), 1.0, 1e-12);

  const auto u0 = sample_gaussian(6, 1.5, {3, 0});
  const auto lin = linear_trajectory(u0, 0.0, 0.01, 100);
  EXPECT_NEAR(mixed_norm(lin, 2, 2, 0, 1), std::sqrt(2 * kPi * l2_squared(u0)), 1e-12);
  // odd interval count closes with a 3/8 panel
  EXPECT_NEAR(mixed_norm(lin, 2, 2, 0, 0.99), std::sqrt(2 * kPi * l2_squared(u0) * 0.99), 1e-12);
  EXPECT_THROW(mixed_norm(lin, 2, 2, 0, 0.995), GridMismatch);
}

TEST(Xsb, ZeroTrajectory) {
  const auto z = constant_trajectory(SpectralField(1.5, 3), 1.0 / 128, 256);
  EXPECT_EQ(xsb_norm(z, 0.5, 0.4, NormParams::starting_at_zero(1.0, 128)), 0.0);
}

TEST(Xsb, LinearFlowIsWindowTransform) {
  const double T = 1.0, b = 0.4, s = 0.5;
  const int m = 3;
  const auto tr = linear_trajectory(SpectralField::mode(1.5, 4, m), 0.0, 1.0 / 256, 512);
  auto p = NormParams::starting_at_zero(T, 256);
  const double expect = std::pow(bracket(m), s) * weighted_chi_l2(b, T);
  // default lambda spacing 2pi/(8T) sums <lambda>^{2b}|chi_hat|^2 to ~1e-5;
  // a finer grid recovers the integral
  EXPECT_NEAR(xsb_norm(tr, s, b, p) / expect, 1.0, 5e-5);
  p.pad = 16;
  EXPECT_NEAR(xsb_norm(tr, s, b, p) / expect, 1.0, 1e-10);
}

TEST(Xsb, ShiftedModulation) {
  const double T = 1.0, b = 0.45, alpha = 1.5;
  const int m = 2;
  Trajectory tr{{}, 0.0, 1.0 / 256, Variant::Derived};
  for (int i = 0; i <= 512; ++i) {
    const double t = i / 256.0;
    tr.fields.push_back(SpectralField::mode(alpha, 3, m, std::polar(1.0, (abs_pow(m, alpha) + 1.0) * t)));
  }
  auto p = NormParams::starting_at_zero(T, 256);
  const double expect = weighted_chi_l2(b, T, 1.0);
  EXPECT_NEAR(xsb_norm(tr, 0.0, b, p) / expect, 1.0, 5e-5);
  p.pad = 16;
  EXPECT_NEAR(xsb_norm(tr, 0.0, b, p) / expect, 1.0, 1e-10);
  EXPECT_GT(std::abs(expect / weighted_chi_l2(b, T) - 1.0), 1e-4);
}

TEST(Xsb, PlancherelAtZeroWeights) {
  const auto u0 = sample_gaussian(8, 1.5, {21, 0});
  const auto tr = evolve(u0, 2.0, 1.0 / 512, {Variant::WickGauged});
  const auto p = NormParams::starting_at_zero(1.0, 512);
  const double got = xsb_norm(tr, 0.0, 0.0, p);
  // int int |chi u|^2 dx dt by Simpson in time
  const std::size_t n = tr.size() - 1;
  double acc = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    const double c = chi((tr.time(i) - p.center) / p.window_T);
    const double w = i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * c * c * 2 * kPi * l2_squared(tr[i]);
  }
  acc *= tr.dt / 3.0;
  EXPECT_NEAR(got, std::sqrt(acc), 1e-6 * std::sqrt(acc));
}

TEST(Xsb, OversampleConvergence) {
  const auto u0 = sample_gaussian(6, 1.5, {4, 0});
  const auto tr = evolve(u0, 2.0, 1.0 / 512, {Variant::WickGauged});
  for (double b : {0.0, 0.3, 0.6}) {
    const double a = xsb_norm(tr, 0.2, b, NormParams::starting_at_zero(1.0, 256));
    const double c = xsb_norm(tr, 0.2, b, NormParams::starting_at_zero(1.0, 512));
    EXPECT_LT(std::abs(a - c) / c, 1e-4) << b;
  }
}

TEST(Xsb, TimeLocalizationExponent) {
  const double b = 0.45, bt = 0.2;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto tr = evolve(sample_gaussian(6, 1.5, {seed, 0}), 2.0, 1.0 / 1024, {Variant::WickGauged});
    NormParams full;
    full.window_T = 1.0;
    full.center = 1.0;
    full.oversample = 1024;
    const double base = xsb_norm(tr, 0.0, b, full);
    std::vector<double> lt, lr;
    for (double T : {0.25, 0.125, 0.0625}) {
      NormParams p = full;
      p.window_T = T;
      const double r = xsb_norm(tr, 0.0, bt, p) / base;
      EXPECT_TRUE(std::isfinite(r));
      EXPECT_LT(r, 1.0);
      lt.push_back(std::log(T));
      lr.push_back(std::log(r));
    }
    EXPECT_GE(linear_fit(lt, lr).slope, (b - bt) - 0.1) << seed;
  }
}

TEST(Xsb, UnresolvedModulationThrows) {
  Trajectory tr{{}, 0.0, 1.0 / 64, Variant::Derived};
  for (int i = 0; i <= 128; ++i) tr.fields.push_back(SpectralField::mode(1.5, 1, 0, std::polar(1.0, 150.0 * i / 64.0)));
  EXPECT_THROW(xsb_norm(tr, 0.0, 0.5, NormParams::starting_at_zero(1.0, 64)), ResolutionError);
  EXPECT_GT(xsb_evaluate(tr, 0.0, 0.5, NormParams::starting_at_zero(1.0, 64)).tail_fraction, 1e-6);

  const auto coarse = linear_trajectory(SpectralField::mode(1.5, 1, 1), 0.0, 1.0 / 32, 64);
  EXPECT_THROW(xsb_norm(coarse, 0.0, 0.5, NormParams::starting_at_zero(1.0, 64)), ResolutionError);
  EXPECT_THROW(xsb_norm(coarse, 0.0, 0.5, NormParams::starting_at_zero(2.0, 32)), InvalidArgument);
}

TEST(OperatorNorms, DiagonalPhaseKernel) {
  const double b = 0.4, q = 4.0, T = 1.0;
  Trajectory zero{std::vector(1025, SpectralField(1.5, 1)), 0.0, 1.0 / 512, Variant::Derived};
  const auto K = solve_kernel(Dyadic::of(4), Dyadic::half(), zero);
  ASSERT_EQ(K.columns.size(), 4u);
  const auto r = operator_norms(K, b, q, NormParams::starting_at_zero(T, 256));
  const double l2 = weighted_chi_l2(b, T);
  EXPECT_NEAR(r.Yb / l2, 1.0, 5e-5);
  EXPECT_NEAR(r.Zb / (2.0 * l2), 1.0, 5e-5);
  const double qd = q / (q - 1.0);
  EXPECT_NEAR(r.Sbq / weighted_chi_lq(2 * b / qd, q, T), 1.0, 5e-5);

  auto fine = NormParams::starting_at_zero(T, 256);
  fine.pad = 16;
  const auto f = operator_norms(K, b, q, fine);
  EXPECT_NEAR(f.Yb / l2, 1.0, 1e-10);
  EXPECT_NEAR(f.Zb / (2.0 * l2), 1.0, 1e-10);
  EXPECT_NEAR(f.Sbq / weighted_chi_lq(2 * b / qd, q, T), 1.0, 1e-8);
}

TEST(OperatorNorms, ZeroKernel) {
  KernelTrajectory K;
  K.N = Dyadic::of(4);
  K.alpha = 1.5;
  K.dt = 1.0 / 64;
  K.columns = K.N.shell_modes();
  K.samples.assign(129, Eigen::MatrixXcd::Zero(9, 4));
  const auto r = operator_norms(K, 0.4, 2.0, NormParams::starting_at_zero(1.0, 64));
  EXPECT_EQ(r.Yb, 0.0);
  EXPECT_EQ(r.Zb, 0.0);
  EXPECT_EQ(r.Sbq, 0.0);
}

TEST(OperatorNorms, OperatorBelowHilbertSchmidt) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 50; ++i) {
    const auto K = smooth_random_kernel(rng, 8, 1.5, 1.0 / 64, 128);
    const auto r = operator_norms(K, 0.45, 3.0, NormParams::starting_at_zero(1.0, 64));
    EXPECT_GT(r.Yb, 0.0);
    EXPECT_LE(r.Yb, r.Zb * (1 + 1e-12)) << i;
  }
}
