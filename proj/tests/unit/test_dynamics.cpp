#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "fnls/ansatz.hpp"
#include "fnls/dynamics.hpp"
#include "fnls/io.hpp"
#include "fnls/nonlinear.hpp"
#include "fnls/random_data.hpp"

using namespace fnls;

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs_diff(const SpectralField& a, const SpectralField& b) {
  const int n = std::max(a.n_max(), b.n_max());
  double m = 0.0;
  for (int k = -n; k <= n; ++k) m = std::max(m, std::abs(a.at(k) - b.at(k)));
  return m;
}

double sup_diff(const Trajectory& a, const Trajectory& b) {
  EXPECT_EQ(a.size(), b.size());
  double m = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) m = std::max(m, max_abs_diff(a[i], b[i]));
  return m;
}

struct Drift {
  double mass;
  double ham;
};

Drift truncated_drift(const SpectralField& u0, int n, double T, double dt) {
  const auto tr = evolve(u0, T, dt, {Variant::TruncatedHam, n});
  const auto& a = tr.fields.front();
  const auto& b = tr.fields.back();
  return {std::abs(mass(b) - mass(a)) / mass(a),
          std::abs(hamiltonian_truncated(b, n) - hamiltonian_truncated(a, n)) / hamiltonian_truncated(a, n)};
}

Trajectory zero_background(double alpha, int cutoff, double half_step, std::size_t half_steps) {
  Trajectory t{{}, 0.0, half_step, Variant::Derived};
  t.fields.assign(half_steps + 1, SpectralField(alpha, cutoff));
  return t;
}

}  // namespace

TEST(LinearPropagate, Examples) {
  const auto u = sample_gaussian(8, 1.3, {1, 1});
  EXPECT_EQ(max_abs_diff(linear_propagate(u, 0.0), u), 0.0);

  const auto e2 = SpectralField::mode(2.0, 4, 2);
  EXPECT_LT(max_abs_diff(linear_propagate(e2, kPi / 4), e2 * cplx(-1.0)), 1e-15);

  for (double t : {0.3, 7.0, -2.5}) EXPECT_NEAR(mass(linear_propagate(u, t)), mass(u), 1e-13 * mass(u));
}

TEST(Evolve, SingleModeExact) {
  const double alpha = 1.5;
  const auto u0 = SpectralField::mode(alpha, 4, 3, 2.0);
  const auto tr = evolve(u0, 1.0, 1e-3, {Variant::FullCubic});
  ASSERT_EQ(tr.size(), 1001u);
  double err = 0.0;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const double t = tr.time(i);
    const auto exact = SpectralField::mode(alpha, 4, 3, 2.0 * std::polar(1.0, (std::pow(3.0, alpha) + 4.0) * t));
    err = std::max(err, max_abs_diff(tr[i], exact));
  }
  EXPECT_LT(err, 1e-8);
}

TEST(Evolve, ZeroNonlinearityIsLinearFlow) {
  const auto u0 = sample_gaussian(12, 1.7, {3, 0});
  for (auto v : {Variant::FullCubic, Variant::TruncatedHam, Variant::WickGauged}) {
    const auto tr = evolve(u0, 0.5, 1e-3, {v, 12, 0.0});
    EXPECT_LT(max_abs_diff(tr.fields.back(), linear_propagate(u0, 0.5)), 1e-12) << to_string(v);
  }
}

TEST(Evolve, TruncatedMassDriftSmall) {
  const auto u0 = sample_gaussian(16, 1.5, {2024, 0});
  const auto d = truncated_drift(u0, 16, 1.0, 1e-3);
  EXPECT_LT(d.mass, 1e-8);
}

TEST(Evolve, DriftFallsWithStep) {
  // large steps so the drift is far above round-off
  const auto u0 = sample_gaussian(16, 2.0, {6, 0}) * cplx(2.0);
  const auto coarse = truncated_drift(u0, 16, 1.0, 1e-2);
  const auto fine = truncated_drift(u0, 16, 1.0, 5e-3);
  EXPECT_GT(coarse.mass, 1e-11);
  EXPECT_GT(coarse.ham, 1e-11);
  EXPECT_GE(coarse.mass / fine.mass, 8.0) << coarse.mass << ' ' << fine.mass;
  EXPECT_GE(coarse.ham / fine.ham, 8.0) << coarse.ham << ' ' << fine.ham;
}

TEST(Evolve, StrideAndStepCount) {
  const auto u0 = sample_gaussian(4, 1.5, {1, 0});
  const auto tr = evolve(u0, 0.1, 1e-3, {Variant::FullCubic}, 10);
  EXPECT_EQ(tr.size(), 11u);
  EXPECT_NEAR(tr.dt, 1e-2, 1e-15);
  EXPECT_THROW(step_count(0.1, 0.03), InvalidArgument);
}

TEST(Evolve, BlowUpIsReported) {
  const auto u0 = SpectralField::mode(1.5, 2, 0, 1e8) + SpectralField::mode(1.5, 2, 1, 1e8);
  EXPECT_THROW(evolve(u0, 1.0, 1e-1, {Variant::FullCubic}), NonFiniteState);
}

TEST(Gauge, UnitMassPhase) {
  const auto e1 = SpectralField::mode(1.5, 3, 1);
  const auto tr = linear_trajectory(e1, 0.0, 0.01, 100);
  const auto g = gauge_map(tr);
  EXPECT_EQ(max_abs_diff(g[0], tr[0]), 0.0);
  for (std::size_t i = 0; i < tr.size(); ++i)
    EXPECT_LT(max_abs_diff(g[i], tr[i] * std::polar(1.0, -2.0 * tr.time(i))), 1e-13);
  EXPECT_LT(sup_diff(inverse_gauge_map(g), tr), 1e-12);
}

TEST(Gauge, WickEqualsGaugedCubic) {
  const int n = 16;
  const auto u0 = sample_gaussian(n, 1.5, {10, 0});
  const auto full = evolve(u0, 0.5, 1e-3, {Variant::FullCubic});
  const auto wick = evolve(u0, 0.5, 1e-3, {Variant::WickGauged});
  EXPECT_LT(sup_diff(gauge_map(full), wick), 1e-6);
}

TEST(Trajectory, DifferenceRequiresSharedGrid) {
  const auto u = sample_gaussian(4, 1.5, {1, 0});
  const auto a = linear_trajectory(u, 0.0, 0.01, 10);
  const auto b = linear_trajectory(u, 0.0, 0.02, 10);
  EXPECT_THROW(difference(a, b), GridMismatch);
  EXPECT_EQ(sup_diff(difference(a, a), Trajectory{std::vector(11, SpectralField(1.5, 4)), 0.0, 0.01}), 0.0);
}

TEST(Trajectory, JsonLinesRoundTrip) {
  const auto tr = evolve(sample_gaussian(5, 1.5, {1, 2}), 0.02, 1e-3, {Variant::FullCubic});
  std::stringstream ss;
  write_trajectory_jsonl(ss, tr, 5);
  const auto back = read_trajectory_jsonl(ss);
  ASSERT_EQ(back.size(), 5u);
  EXPECT_NEAR(back.dt, 5e-3, 1e-15);
  EXPECT_EQ(back.variant, Variant::FullCubic);
  for (std::size_t i = 0; i < back.size(); ++i) EXPECT_EQ(max_abs_diff(back[i], tr[5 * i]), 0.0);

  std::stringstream csv;
  write_trajectory_csv(csv, tr, 10);
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "t,k,abs");
  std::size_t rows = 0;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 3u * 11u);
}

TEST(Kernel, ZeroBackgroundIsPhase) {
  const auto N = Dyadic::of(8);
  const auto L = Dyadic::of(2);
  const double alpha = 1.5, h = 1e-2;
  const auto K = solve_kernel(N, L, zero_background(alpha, 4, h / 2, 40), {1, 0.05, true});
  ASSERT_EQ(K.size(), 21u);
  for (std::size_t i = 0; i < K.size(); ++i)
    for (std::size_t c = 0; c < K.columns.size(); ++c)
      for (int k = -8; k <= 8; ++k) {
        const cplx expect = k == K.columns[c] ? std::polar(1.0, K.time(i) * std::pow(std::abs(k), alpha)) : 0.0;
        ASSERT_LT(std::abs(K.entry(i, k, static_cast<int>(c)) - expect), 1e-13);
      }
}

TEST(Kernel, SupportIdentityAndLinearity) {
  const auto N = Dyadic::of(16);
  const auto L = Dyadic::of(4);
  const double alpha = 1.5;
  const auto v = evolve(sample_gaussian(8, alpha, {4, 0}), 0.2, 5e-3, {Variant::WickGauged});
  const auto K = solve_kernel(N, L, v);
  EXPECT_EQ(K.columns, N.shell_modes());
  for (int ks : K.columns) EXPECT_TRUE(ks != 0 && std::abs(ks) > 8 && std::abs(ks) <= 16);
  for (std::size_t c = 0; c < K.columns.size(); ++c)
    for (int k = -16; k <= 16; ++k) EXPECT_EQ(K.entry(0, k, static_cast<int>(c)), k == K.columns[c] ? cplx(1.0) : cplx(0.0));

  const cplx a(0.7, -1.3);
  const int pick = 3;
  const auto col = solve_high_low_low(N, L, v, SpectralField::mode(alpha, 16, K.columns[pick], a));
  ASSERT_EQ(col.size(), K.size());
  double err = 0.0;
  for (std::size_t i = 0; i < K.size(); ++i)
    for (int k = -16; k <= 16; ++k) err = std::max(err, std::abs(col[i][k] - a * K.entry(i, k, pick)));
  EXPECT_LT(err, 1e-13);
  EXPECT_GT(std::abs(K.entry(K.size() - 1, K.columns[pick] + 1, pick)), 0.0);
}

TEST(Kernel, NearDiagonalConcentration) {
  const auto N = Dyadic::of(32);
  const auto L = Dyadic::of(4);
  const auto v = evolve(sample_gaussian(8, 1.5, {9, 0}), 0.25, 5e-3, {Variant::WickGauged});
  const auto H = solve_kernel(N, L, v);
  const auto H2 = solve_kernel(N, L.halved(), v);
  const auto h = kernel_difference(H, H2);
  double prev = 1.0;
  for (double w : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    const double f = kernel_offdiagonal_fraction(h, w);
    EXPECT_LE(f, prev) << w;
    prev = f;
  }
  EXPECT_LT(kernel_offdiagonal_fraction(h, 4.0 * std::pow(32.0, 0.1)), 0.2);
}

TEST(Kernel, BackgroundGridChecked) {
  const auto bad = zero_background(1.5, 1, 1e-2, 40);
  EXPECT_THROW(solve_kernel(Dyadic::of(8), Dyadic::of(2), bad), GridMismatch);
  EXPECT_THROW(solve_kernel(Dyadic::of(8), Dyadic::of(2), zero_background(1.5, 4, 1e-2, 41)), InvalidArgument);
  EXPECT_THROW(kernel_difference(solve_kernel(Dyadic::of(8), Dyadic::half(), zero_background(1.5, 4, 1e-2, 40)),
                                 solve_kernel(Dyadic::of(8), Dyadic::half(), zero_background(1.5, 4, 1e-2, 20))),
               GridMismatch);
}
