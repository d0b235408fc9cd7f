#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fnls/io.hpp"
#include "fnls/nonlinear.hpp"
#include "fnls/random_data.hpp"
#include "fnls/spectral_field.hpp"

using namespace fnls;

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs_diff(const SpectralField& a, const SpectralField& b) {
  const int n = std::max(a.n_max(), b.n_max());
  double m = 0.0;
  for (int k = -n; k <= n; ++k) m = std::max(m, std::abs(a.at(k) - b.at(k)));
  return m;
}

double max_abs(const SpectralField& a) {
  double m = 0.0;
  for (const auto& c : a.coeffs()) m = std::max(m, std::abs(c));
  return m;
}

// direct triple loop over k1 - k2 + k3 = k with k2 != k1, k3
SpectralField n3_oracle(const SpectralField& f1, const SpectralField& f2, const SpectralField& f3) {
  const int n = f1.n_max() + f2.n_max() + f3.n_max();
  SpectralField out(f1.alpha(), n);
  for (int k1 = -f1.n_max(); k1 <= f1.n_max(); ++k1)
    for (int k2 = -f2.n_max(); k2 <= f2.n_max(); ++k2)
      for (int k3 = -f3.n_max(); k3 <= f3.n_max(); ++k3) {
        if (k2 == k1 || k2 == k3) continue;
        out[k1 - k2 + k3] += f1[k1] * std::conj(f2[k2]) * f3[k3];
      }
  return out;
}

// int |u|^4 by Riemann sum on a grid fine enough to be exact
double quartic_oracle(const SpectralField& u) {
  const int M = 8 * u.n_max() + 8;
  double s = 0.0;
  for (int j = 0; j < M; ++j) {
    const double x = 2.0 * kPi * j / M;
    cplx v = 0.0;
    for (int k = -u.n_max(); k <= u.n_max(); ++k) v += u[k] * std::polar(1.0, k * x);
    s += std::pow(std::norm(v), 2);
  }
  return s * 2.0 * kPi / M;
}

}  // namespace

TEST(Project, FullKeepsModeInsideCutoff) {
  const auto e3 = SpectralField::mode(1.5, 8, 3);
  EXPECT_EQ(max_abs_diff(project(e3, Dyadic::of(4), ProjectionMode::Full), e3), 0.0);
}

TEST(Project, ShellDropsLowerHalf) {
  const auto e2 = SpectralField::mode(1.5, 8, 2);
  const auto p = project(e2, Dyadic::of(4), ProjectionMode::Shell);
  EXPECT_EQ(max_abs(p), 0.0);
  EXPECT_EQ(p.n_max(), 8);
}

TEST(Project, FullDropsModeOutside) {
  EXPECT_EQ(max_abs(project(SpectralField::mode(1.5, 8, 5), Dyadic::of(4), ProjectionMode::Full)), 0.0);
}

TEST(Project, FullPlusComplementReconstructs) {
  const auto u = sample_gaussian(20, 1.3, {3, 0});
  for (int N : {1, 2, 4, 8, 16, 32}) {
    const auto d = Dyadic::of(N);
    const auto sum = project(u, d, ProjectionMode::Full) + project(u, d, ProjectionMode::Complement);
    EXPECT_EQ(max_abs_diff(sum, u), 0.0) << N;
  }
}

TEST(Project, HalfScaleIsZeroMode) {
  const auto u = sample_gaussian(4, 1.5, {1, 0});
  const auto p = project(u, Dyadic::half(), ProjectionMode::Shell);
  EXPECT_EQ(p[0], u[0]);
  for (int k = 1; k <= 4; ++k) EXPECT_EQ(std::abs(p[k]) + std::abs(p[-k]), 0.0);
}

TEST(SpectralField, RejectsBadConstruction) {
  EXPECT_THROW(SpectralField(0.5, 4), InvalidArgument);
  EXPECT_THROW(SpectralField(1.5, 2, std::vector<cplx>(4)), InvalidArgument);
  EXPECT_THROW(SpectralField(1.5, 1, std::vector<cplx>{0.0, NAN, 0.0}), InvalidArgument);
}

TEST(WeightBracket, Values) {
  EXPECT_DOUBLE_EQ(weight_bracket(0, 1.7), 1.0);
  EXPECT_NEAR(weight_bracket(1, 1.2), 1.414214, 1e-6);
  EXPECT_NEAR(weight_bracket(2, 2.0), 2.236068, 1e-6);
}

TEST(Resonance, Values) {
  EXPECT_DOUBLE_EQ(resonance_phi(1, 2, 3, 2.0), 2.0);
  EXPECT_DOUBLE_EQ(resonance_phi(5, 0, 0, 1.5), 0.0);
  EXPECT_DOUBLE_EQ(resonance_phi(3, -1, 2, 1.0), -2.0);
}

TEST(Resonance, QuadraticFactorizationExact) {
  for (int k1 = -64; k1 <= 64; k1 += 3)
    for (int k2 = -64; k2 <= 64; k2 += 5)
      for (int k3 = -64; k3 <= 64; ++k3)
        ASSERT_EQ(resonance_phi(k1, k2, k3, 2.0) + 2.0 * (k1 - k2) * (k3 - k2), 0.0) << k1 << ' ' << k2 << ' ' << k3;
}

TEST(TrilinearN3, SingleModes) {
  const auto e0 = SpectralField::mode(1.5, 3, 0);
  EXPECT_EQ(max_abs(trilinear_n3(e0, e0, e0)), 0.0);

  const auto r = trilinear_n3(SpectralField::mode(1.5, 3, 1), SpectralField::mode(1.5, 3, 2),
                              SpectralField::mode(1.5, 3, 3));
  EXPECT_NEAR(std::abs(r.at(2) - cplx(1.0)), 0.0, 1e-14);
  EXPECT_NEAR(max_abs(r - SpectralField::mode(1.5, r.n_max(), 2)), 0.0, 1e-14);

  EXPECT_LT(max_abs(trilinear_n3(SpectralField::mode(1.5, 3, 1), e0, e0)), 1e-15);
}

TEST(TrilinearN3, MatchesTripleSum) {
  for (int n : {1, 3, 7, 16}) {
    const auto f1 = sample_gaussian(n, 1.5, {11, 0}, 0);
    const auto f2 = sample_gaussian(n, 1.5, {11, 0}, 1);
    const auto f3 = sample_gaussian(n, 1.5, {11, 0}, 2);
    const auto fast = trilinear_n3(f1, f2, f3);
    const auto slow = n3_oracle(f1, f2, f3);
    ASSERT_EQ(fast.n_max(), slow.n_max());
    EXPECT_LT(max_abs_diff(fast, slow) / max_abs(slow), 1e-12) << n;
  }
}

TEST(TrilinearN0, Values) {
  const auto e1 = SpectralField::mode(1.5, 2, 1);
  EXPECT_LT(max_abs_diff(trilinear_n0(e1, e1, e1), e1), 1e-15);
  EXPECT_EQ(max_abs(trilinear_n0(e1, SpectralField::mode(1.5, 2, 2), e1)), 0.0);
  const auto r = trilinear_n0(SpectralField::mode(1.5, 2, 0, 2.0), SpectralField::mode(1.5, 2, 0, 3.0),
                              SpectralField::mode(1.5, 2, 0));
  EXPECT_EQ(r[0], cplx(6.0));
}

TEST(Functionals, MassAndHamiltonian) {
  const auto one = SpectralField::mode(1.5, 4, 0);
  EXPECT_NEAR(mass(one), 2 * kPi, 1e-13);
  EXPECT_NEAR(hamiltonian(one), kPi, 1e-13);
  for (double a : {1.0, 1.5, 2.0}) {
    const auto e1 = SpectralField::mode(a, 4, 1);
    EXPECT_NEAR(mass(e1), 2 * kPi, 1e-13);
    EXPECT_NEAR(hamiltonian(e1), 3 * kPi, 1e-13);
  }
  const SpectralField zero(1.5, 4);
  EXPECT_EQ(mass(zero), 0.0);
  EXPECT_EQ(hamiltonian(zero), 0.0);
}

TEST(Functionals, QuarticIntegral) {
  EXPECT_NEAR(quartic_integral(SpectralField::mode(1.5, 3, 0)), 2 * kPi, 1e-13);
  EXPECT_NEAR(quartic_integral(SpectralField::mode(1.5, 3, 2)), 2 * kPi, 1e-13);
  // |1 + e^{ix}|^4 averages to 6
  const auto u = SpectralField::mode(1.5, 3, 0) + SpectralField::mode(1.5, 3, 1);
  EXPECT_NEAR(quartic_integral(u), 12 * kPi, 1e-12);
  const auto g = sample_gaussian(9, 1.2, {5, 2});
  EXPECT_NEAR(quartic_integral(g), quartic_oracle(g), 1e-11 * quartic_oracle(g));
}

TEST(Functionals, PhaseInvariance) {
  const auto u = sample_gaussian(12, 1.4, {9, 1});
  const auto v = u * std::polar(1.0, 0.73);
  EXPECT_NEAR(mass(v), mass(u), 1e-13 * mass(u));
  EXPECT_NEAR(hamiltonian(v), hamiltonian(u), 1e-13 * hamiltonian(u));
}

TEST(Functionals, TruncatedHamiltonianIgnoresHighModes) {
  const auto u = sample_gaussian(16, 1.5, {2, 0});
  EXPECT_NEAR(hamiltonian_truncated(u, 4), hamiltonian(project_cutoff(u, 4)), 1e-13);
}

TEST(Dyadic, LadderAndGap) {
  const auto ladder = dyadic_ladder(Dyadic::of(8));
  ASSERT_EQ(ladder.size(), 5u);
  EXPECT_TRUE(ladder.front().is_half());
  EXPECT_EQ(ladder.back().value(), 8);
  EXPECT_THROW(Dyadic::of(6), InvalidArgument);
  for (auto [N, L] : {std::pair{16, 8}, {32, 16}, {64, 32}, {128, 64}})
    EXPECT_EQ(largest_dyadic_below(Dyadic::of(N), 0.05).value(), L);
  EXPECT_TRUE(largest_dyadic_below(Dyadic::of(1), 0.05).is_half());
}

TEST(Serialization, JsonRoundTrip) {
  const auto u = sample_gaussian(6, 1.7, {4, 4});
  const auto j = field_to_json(u);
  EXPECT_EQ(j.at("n_max").get<int>(), 6);
  EXPECT_EQ(j.at("re").size(), 13u);
  const auto v = field_from_json(json::parse(j.dump()));
  EXPECT_EQ(v.alpha(), u.alpha());
  EXPECT_EQ(max_abs_diff(u, v), 0.0);

  auto bad = j;
  bad["im"].erase(0);
  EXPECT_THROW(field_from_json(bad), InvalidArgument);
}
