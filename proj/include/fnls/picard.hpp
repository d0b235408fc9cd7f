#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <vector>

#include "fnls/dynamics.hpp"

namespace fnls {

using Rational = boost::multiprecision::cpp_rational;

/// kappa_0 = 1, kappa_j = (1/j) sum_{j1+j2+j3=j-1} kappa_j1 kappa_j2 kappa_j3,
/// in exact rational arithmetic.
Rational kappa(int j);
/// kappa_0 .. kappa_J.
std::vector<Rational> kappa_sequence(int J);

struct GeneratingFunctionCheck {
  double z = 0.0;
  int J = 0;
  double partial_sum = 0.0;
  /// (1 - 2z)^{-1/2}.
  double limit = 0.0;
  double error = 0.0;
  /// 2 kappa_{J+1} z^{J+1}.
  double tail_bound = 0.0;
};

/// Partial sum of sum_j kappa_j z^j against its closed form, for 0 <= z < 1/2.
GeneratingFunctionCheck generating_function_check(double z, int J);

/// int_0^{t_i} f for all grid points i, by composite Simpson on even nodes and
/// a three-point half panel on odd nodes.
std::vector<cplx> cumulative_simpson(const std::vector<cplx>& f, double h);

/// Picard iterates z_1 = S(t) phi and
///   (i d_t + |D|^alpha) z_{2j+1} = - sum_{j1+j2+j3=j-1} z_{2j1+1} conj(z_{2j2+1}) z_{2j3+1},
/// z_{2j+1}(0) = 0, on the grid t_i = i dt, i = 0..T/dt. z_{2j+1} is carried at
/// cutoff (2j+1) n so that no product is truncated. Iterates are memoized.
class PicardChain {
 public:
  PicardChain(SpectralField phi, double T, double dt);

  const Trajectory& iterate(int j);
  /// z_1 + z_3 + ... + z_{2J+1}, at cutoff (2J+1) n.
  Trajectory partial_sum(int J);

  double dt() const { return dt_; }
  std::size_t steps() const { return steps_; }

 private:
  SpectralField phi_;
  double dt_;
  std::size_t steps_;
  std::map<int, Trajectory> memo_;
};

/// z_{2j+1} on [0, T] with step dt; convenience wrapper over PicardChain.
Trajectory picard_iterate(int j, const SpectralField& phi, double T, double dt);

/// |(i d_t + |D|^alpha) Z + |Z|^2 Z|_{L^2_x} at grid index i, with the time
/// derivative taken by a fourth-order centered difference of the trajectory.
double equation_residual(const Trajectory& Z, std::size_t i);

struct MomentResult {
  int j = 0;
  int n = 0;
  double alpha = 0.0;
  double t = 0.0;
  std::size_t samples = 0;
  double mean = 0.0;
  double std_error = 0.0;
  /// t^{2j} (2j+1)! kappa_j^2.
  double bound_value = 0.0;
  double ratio = 0.0;
};

/// Monte Carlo estimate of E|z_{2j+1}(t, 0)|^2 over phi = sample_gaussian(n),
/// for every t in `times` (all multiples of dt).
std::vector<MomentResult> moment_bound_check(int j, int n, double alpha, const std::vector<double>& times,
                                             std::size_t n_samples, std::uint64_t seed, double dt = 1e-3);

}  // namespace fnls
