#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fnls/spectral_field.hpp"

namespace fnls {

struct CountResult {
  long long count = 0;
  double bound = 0.0;
  double ratio() const { return bound > 0.0 ? static_cast<double>(count) / bound : 0.0; }
};

/// #{i : phi_values[i] in [j_lo, j_hi]} against 1 + |J| / inf |phi'| for a
/// monotone table. An empty interval (j_lo > j_hi) counts nothing.
CountResult counting_principle_check(const std::vector<double>& phi_values, double j_lo, double j_hi,
                                     double inf_derivative);

enum class Regime { HLL, HHH };

struct LevelSetQuery {
  long long N = 1;
  long long k2 = 0;
  long long k3 = 1;
  double mu = 0.0;
  double eps = 0.1;
  double alpha = 2.0;
  Regime regime = Regime::HLL;

  void validate() const;
};

/// Frequencies k1 with N/2 < |k1| <= 2N; in the HHH regime k1 = k2 is excluded.
std::vector<long long> levelset_shell(const LevelSetQuery& q);

/// N^eps (1 + N^{2 - alpha} / <k2 - k3>).
double levelset_reference_bound(const LevelSetQuery& q);

/// Exact count of shell frequencies k1 with |Phi(k1, k2, k3) - mu| <= N^eps.
CountResult levelset_count(const LevelSetQuery& q);

/// sup over mu of levelset_count, evaluated exactly by a sliding window over
/// the sorted values of Phi on the shell (q.mu is ignored).
CountResult levelset_sup_over_mu(const LevelSetQuery& q);

struct PairQuery {
  long long a = 0;
  double l = 0.0;
  long long M1 = 1;
  long long M2 = 1;
  double r = 1.0;
  double alpha = 2.0;
};

/// min(M1, M2)^{1 - alpha/2} r^{1/2}.
double pair_reference_bound(const PairQuery& q);

/// #{k : M1 <= |k| <= 2 M1, M2 <= |a - k| <= 2 M2, ||k|^alpha + |a-k|^alpha - l| <= r}.
CountResult pair_levelset_count(const PairQuery& q);

/// sup over l of pair_levelset_count (q.l is ignored), exact.
CountResult pair_sup_over_l(const PairQuery& q);

struct SweepRecord {
  /// Query parameters as "key=value" pairs separated by ';'.
  std::string params;
  CountResult result;
};

struct SweepResult {
  double alpha = 0.0;
  long long N = 0;
  std::size_t queries = 0;
  /// sup over queries of count / bound.
  double constant = 0.0;
  long long max_count = 0;
  std::vector<SweepRecord> records;
};

/// Random queries at scale N: HLL takes 0 < |k2|, |k3| <= N/8, HHH takes
/// N/2 < |k2|, |k3| <= 2N; k2 != k3 always. Each query is maximized over mu.
SweepResult levelset_sweep(double alpha, long long N, double eps, Regime regime, std::size_t n_queries,
                           std::uint64_t seed);

/// Random pair queries with M1 = M2 = N, |a| <= 4N and r log-uniform in
/// [1/100, 100], each maximized over l.
SweepResult pair_sweep(double alpha, long long N, std::size_t n_queries, std::uint64_t seed);

struct ConvolutionPoint {
  double x = 0.0;
  double integral = 0.0;
};

struct ConvolutionFit {
  double sigma = 0.0;
  double beta = 0.0;
  /// Exponent gamma of the bound for the given (sigma, beta, eps).
  double gamma = 0.0;
  /// Least-squares slope of log(integral) against log<x>.
  double slope = 0.0;
  std::vector<ConvolutionPoint> points;
};

/// The exponent gamma with int <y-x>^{-sigma} <y>^{-beta} dy <~ <x>^{-gamma}:
/// sigma + beta - 1 if beta < 1, sigma - eps if beta = 1, sigma if beta > 1.
double convolution_gamma(double sigma, double beta, double eps);

/// int_R <y - x>^{-sigma} <y>^{-beta} dy by adaptive quadrature.
double convolution_integral(double sigma, double beta, double x);

ConvolutionFit convolution_bound_check(double sigma, double beta, const std::vector<double>& x_grid,
                                       double eps);

/// n log-spaced points in [lo, hi].
std::vector<double> log_grid(double lo, double hi, std::size_t n);

struct StrichartzStats {
  long long N = 0;
  long long M = 0;
  double alpha = 0.0;
  double s = 0.0;
  std::size_t samples = 0;
  double max_ratio = 0.0;
  double mean_ratio = 0.0;
};

/// ||chi f chi g||_{L^2_{t,x}} / (M^s ||f||_{X^{0,3/8}} ||g||_{X^{0,3/8}}) for the
/// free evolutions f, g of the given data, with chi the unit time cutoff. Zero
/// data give 0.
double bilinear_strichartz_ratio(const SpectralField& f0, const SpectralField& g0, double M, double s);

/// ||f g||_{L^2_{t,x}} / (M^s ||f||_{X^{0,3/8}} ||g||_{X^{0,3/8}}) for f, g
/// chi-windowed free evolutions of independent Gaussian data on the shells
/// N/2 < |k| <= N and M/2 < |k| <= M.
StrichartzStats strichartz_ratio(long long N, long long M, double alpha, double s, std::size_t n_samples,
                                 std::uint64_t seed);

}  // namespace fnls
