#include "fnls/counting.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "fnls/dynamics.hpp"
#include "fnls/fourier_grid.hpp"
#include "fnls/norms.hpp"
#include "fnls/parallel.hpp"
#include "fnls/random_data.hpp"
#include "fnls/stats.hpp"

namespace fnls {

namespace {

// Largest number of sorted values that fit in a closed window of the given width.
long long max_in_window(std::vector<double> v, double width) {
  std::sort(v.begin(), v.end());
  long long best = 0;
  std::size_t hi = 0;
  for (std::size_t lo = 0; lo < v.size(); ++lo) {
    hi = std::max(hi, lo);
    while (hi < v.size() && v[hi] <= v[lo] + width) ++hi;
    best = std::max(best, static_cast<long long>(hi - lo));
  }
  return best;
}

std::vector<double> phi_on_shell(const LevelSetQuery& q) {
  std::vector<double> out;
  for (long long k1 : levelset_shell(q)) out.push_back(resonance_phi(k1, q.k2, q.k3, q.alpha));
  return out;
}

std::vector<double> pair_values(const PairQuery& q) {
  require(q.M1 >= 1 && q.M2 >= 1, "pair scales must be positive");
  std::vector<double> out;
  for (long long m = q.M1; m <= 2 * q.M1; ++m) {
    for (long long k : {m, -m}) {
      const long long d = std::llabs(q.a - k);
      if (d >= q.M2 && d <= 2 * q.M2) out.push_back(abs_pow(k, q.alpha) + abs_pow(q.a - k, q.alpha));
    }
  }
  return out;
}

}  // namespace

CountResult counting_principle_check(const std::vector<double>& phi_values, double j_lo, double j_hi,
                                     double inf_derivative) {
  require(inf_derivative > 0.0, "derivative infimum must be positive");
  CountResult r;
  if (j_lo > j_hi) {
    r.bound = 1.0;
    return r;
  }
  for (double v : phi_values)
    if (v >= j_lo && v <= j_hi) ++r.count;
  r.bound = 1.0 + (j_hi - j_lo) / inf_derivative;
  return r;
}

void LevelSetQuery::validate() const {
  require(N >= 1, "N must be positive");
  require(k2 != k3, "k2 = k3 is excluded");
  require(alpha >= 1.0 && alpha <= 2.0, "alpha must lie in [1, 2]");
  const long long m = std::max(std::llabs(k2), std::llabs(k3));
  if (regime == Regime::HLL) {
    require(N >= 8 * m, "HLL requires N >= 8 max(|k2|, |k3|)");
  } else {
    auto in_range = [&](long long k) { return 2 * std::llabs(k) > N && std::llabs(k) <= 2 * N; };
    require(in_range(k2) && in_range(k3), "HHH requires N/2 < |k2|, |k3| <= 2N");
  }
}

std::vector<long long> levelset_shell(const LevelSetQuery& q) {
  q.validate();
  std::vector<long long> out;
  for (long long k = -2 * q.N; k <= 2 * q.N; ++k) {
    if (2 * std::llabs(k) <= q.N) continue;
    if (q.regime == Regime::HHH && k == q.k2) continue;
    out.push_back(k);
  }
  return out;
}

double levelset_reference_bound(const LevelSetQuery& q) {
  const auto N = static_cast<double>(q.N);
  return std::pow(N, q.eps) * (1.0 + std::pow(N, 2.0 - q.alpha) / japanese(static_cast<double>(q.k2 - q.k3)));
}

CountResult levelset_count(const LevelSetQuery& q) {
  const double width = std::pow(static_cast<double>(q.N), q.eps);
  CountResult r;
  for (double v : phi_on_shell(q))
    if (std::abs(v - q.mu) <= width) ++r.count;
  r.bound = levelset_reference_bound(q);
  return r;
}

CountResult levelset_sup_over_mu(const LevelSetQuery& q) {
  const double width = std::pow(static_cast<double>(q.N), q.eps);
  return {max_in_window(phi_on_shell(q), 2.0 * width), levelset_reference_bound(q)};
}

double pair_reference_bound(const PairQuery& q) {
  return std::pow(static_cast<double>(std::min(q.M1, q.M2)), 1.0 - q.alpha / 2.0) * std::sqrt(q.r);
}

CountResult pair_levelset_count(const PairQuery& q) {
  require(q.r >= 0.01, "r must be at least 1/100");
  CountResult out;
  for (double v : pair_values(q))
    if (std::abs(v - q.l) <= q.r) ++out.count;
  out.bound = pair_reference_bound(q);
  return out;
}

CountResult pair_sup_over_l(const PairQuery& q) {
  require(q.r >= 0.01, "r must be at least 1/100");
  return {max_in_window(pair_values(q), 2.0 * q.r), pair_reference_bound(q)};
}

namespace {

SweepResult summarize(double alpha, long long N, std::vector<SweepRecord> records) {
  SweepResult out{alpha, N, records.size(), 0.0, 0, {}};
  for (const auto& r : records) {
    out.constant = std::max(out.constant, r.result.ratio());
    out.max_count = std::max(out.max_count, r.result.count);
  }
  out.records = std::move(records);
  return out;
}

}  // namespace

SweepResult levelset_sweep(double alpha, long long N, double eps, Regime regime, std::size_t n_queries,
                           std::uint64_t seed) {
  require(regime == Regime::HHH || N >= 8, "HLL sweep needs N >= 8");
  std::vector<SweepRecord> results(n_queries);
  parallel_for(n_queries, [&](std::size_t i) {
    KeyedEngine rng(seed, i, static_cast<std::uint64_t>(N), regime == Regime::HLL ? 0 : 1);
    const long long lo = regime == Regime::HLL ? 1 : N / 2 + 1;
    const long long hi = regime == Regime::HLL ? N / 8 : 2 * N;
    std::uniform_int_distribution<long long> mag(lo, hi);
    std::bernoulli_distribution sign;
    LevelSetQuery q{N, 0, 0, 0.0, eps, alpha, regime};
    while (q.k2 == q.k3) {
      q.k2 = sign(rng) ? mag(rng) : -mag(rng);
      q.k3 = sign(rng) ? mag(rng) : -mag(rng);
    }
    results[i] = {"k2=" + std::to_string(q.k2) + ";k3=" + std::to_string(q.k3), levelset_sup_over_mu(q)};
  });
  return summarize(alpha, N, std::move(results));
}

SweepResult pair_sweep(double alpha, long long N, std::size_t n_queries, std::uint64_t seed) {
  std::vector<SweepRecord> results(n_queries);
  parallel_for(n_queries, [&](std::size_t i) {
    KeyedEngine rng(seed, i, static_cast<std::uint64_t>(N), 2);
    std::uniform_int_distribution<long long> a(-4 * N, 4 * N);
    std::uniform_real_distribution<double> log_r(std::log(0.01), std::log(100.0));
    PairQuery q{a(rng), 0.0, N, N, 0.0, alpha};
    q.r = std::exp(log_r(rng));
    std::ostringstream params;
    params.precision(17);
    params << "a=" << q.a << ";M1=" << N << ";M2=" << N << ";r=" << q.r;
    results[i] = {params.str(), pair_sup_over_l(q)};
  });
  return summarize(alpha, N, std::move(results));
}

double convolution_gamma(double sigma, double beta, double eps) {
  require(sigma >= 0.0 && sigma <= beta && sigma + beta > 1.0, "requires 0 <= sigma <= beta, sigma + beta > 1");
  if (beta < 1.0) return sigma + beta - 1.0;
  if (beta == 1.0) return sigma - eps;
  return sigma;
}

double convolution_integral(double sigma, double beta, double x) {
  require(sigma + beta > 1.0, "integral diverges unless sigma + beta > 1");
  auto f = [&](double y) { return std::pow(japanese(y - x), -sigma) * std::pow(japanese(y), -beta); };
  const double lo = std::min(0.0, x);
  const double hi = std::max(0.0, x);
  using boost::math::quadrature::gauss_kronrod;
  boost::math::quadrature::exp_sinh<double> tail;
  const double right = tail.integrate([&](double u) { return f(hi + u); });
  const double left = tail.integrate([&](double u) { return f(lo - u); });
  double middle = 0.0;
  if (hi > lo) {
    const double mid = 0.5 * (lo + hi);
    middle = gauss_kronrod<double, 61>::integrate(f, lo, mid, 30, 1e-13) +
             gauss_kronrod<double, 61>::integrate(f, mid, hi, 30, 1e-13);
  }
  return left + middle + right;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  require(lo > 0.0 && hi > lo && n >= 2, "invalid log grid");
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1)));
  return out;
}

ConvolutionFit convolution_bound_check(double sigma, double beta, const std::vector<double>& x_grid,
                                       double eps) {
  require(x_grid.size() >= 2, "need at least two points to fit a slope");
  ConvolutionFit fit;
  fit.sigma = sigma;
  fit.beta = beta;
  fit.gamma = convolution_gamma(sigma, beta, eps);
  std::vector<double> lx, ly;
  for (double x : x_grid) {
    const double I = convolution_integral(sigma, beta, x);
    fit.points.push_back({x, I});
    lx.push_back(std::log(japanese(x)));
    ly.push_back(std::log(I));
  }
  fit.slope = linear_fit(lx, ly).slope;
  return fit;
}

namespace {

// Squared L^2_{t,x} norm of chi(t) f(t) g(t) for free evolutions f, g, by the
// trapezoid rule in t (exact up to the decay of the cutoff's transform).
double bilinear_l2_squared(const SpectralField& f0, const SpectralField& g0) {
  const double alpha = f0.alpha();
  const double top = abs_pow(f0.n_max(), alpha) + abs_pow(g0.n_max(), alpha);
  constexpr double kCutoffBand = 600.0;
  const auto steps = static_cast<int>(std::ceil(2.0 * (2.0 * top + kCutoffBand) / (2.0 * std::numbers::pi)));
  const double h = 2.0 / steps;
  const FourierGrid grid(FourierGrid::smooth_size(2 * (f0.n_max() + g0.n_max()) + 2));
  std::vector<cplx> fx(static_cast<std::size_t>(grid.size())), gx(fx.size());
  double acc = 0.0;
  for (int i = 1; i < steps; ++i) {
    const double t = -1.0 + h * i;
    const double c = chi(t);
    if (c == 0.0) continue;
    grid.to_physical(linear_propagate(f0, t), fx);
    grid.to_physical(linear_propagate(g0, t), gx);
    double space = 0.0;
    for (std::size_t j = 0; j < fx.size(); ++j) space += std::norm(fx[j] * gx[j]);
    acc += std::pow(c, 4) * space * 2.0 * std::numbers::pi / grid.size();
  }
  return acc * h;
}

double windowed_xsb(const SpectralField& u0, double b) {
  const NormParams p = NormParams::starting_at_zero(1.0, 64);
  const double dt = 1.0 / p.oversample;
  const Trajectory traj = linear_trajectory(u0, 0.0, dt, static_cast<std::size_t>(2 * p.oversample));
  return xsb_norm(traj, 0.0, b, p);
}

SpectralField shell_data(long long N, double alpha, const SeedSpec& seed, std::uint64_t stream) {
  const Dyadic D = Dyadic::of(static_cast<int>(N));
  return project(sample_gaussian(static_cast<int>(N), alpha, seed, stream), D, ProjectionMode::Shell);
}

}  // namespace

double bilinear_strichartz_ratio(const SpectralField& f0, const SpectralField& g0, double M, double s) {
  require(f0.alpha() == g0.alpha(), "data must share alpha");
  require(M > 0.0, "M must be positive");
  const double lhs = std::sqrt(bilinear_l2_squared(f0, g0));
  const double rhs = windowed_xsb(f0, 0.375) * windowed_xsb(g0, 0.375);
  return rhs > 0.0 ? lhs / (std::pow(M, s) * rhs) : 0.0;
}

StrichartzStats strichartz_ratio(long long N, long long M, double alpha, double s, std::size_t n_samples,
                                 std::uint64_t seed) {
  require(N >= M && M >= 1, "requires N >= M >= 1");
  require(n_samples >= 1, "need at least one sample");
  std::vector<double> ratios(n_samples);
  parallel_for(n_samples, [&](std::size_t i) {
    ratios[i] = bilinear_strichartz_ratio(shell_data(N, alpha, {seed, i}, 1), shell_data(M, alpha, {seed, i}, 2),
                                          static_cast<double>(M), s);
  });
  StrichartzStats out{N, M, alpha, s, n_samples, 0.0, 0.0};
  for (double r : ratios) {
    out.max_ratio = std::max(out.max_ratio, r);
    out.mean_ratio += r / static_cast<double>(n_samples);
  }
  return out;
}

}  // namespace fnls
