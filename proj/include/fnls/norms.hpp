#pragma once

#include <limits>

#include "fnls/dynamics.hpp"
#include "fnls/spectral_field.hpp"

namespace fnls {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Time cutoff: smooth, equal to 1 on |t| <= 1/2, supported in (-1, 1).
double chi(double t);

/// Unnormalized Fourier transform of chi(t / T), int chi(t/T) e^{-i lambda t} dt.
/// Computed by adaptive quadrature; used as a reference value.
double chi_hat(double lambda, double window_T);

struct NormParams {
  double s = 0.0;
  double b = 0.0;
  double q = 2.0;
  /// chi((t - center) / window_T) is the time window.
  double window_T = 1.0;
  /// Samples per unit time used by the modulation transform (>= 64).
  int oversample = 64;
  /// Center of the window; the trajectory must cover [center - T, center + T].
  double center = 1.0;
  /// Zero-padding factor of the time transform.
  int pad = 4;
  /// Relative weight allowed beyond half the Nyquist frequency.
  double nyquist_tolerance = 1e-6;

  void validate() const;
  /// Window centered at window_T, i.e. [0, 2 window_T].
  static NormParams starting_at_zero(double window_T, int oversample = 64);
};

/// ||<k>^s u^(k)||_{l^2}.
double sobolev_norm(const SpectralField& u, double s);

/// ||<k>^s u^(k)||_{l^q}; q = kInf gives the sup.
double fl_norm(const SpectralField& u, double s, double q);

/// ||u(x)||_{L^q(T)} on a padded physical grid (sup over a 8x refined grid
/// for q = kInf, trapezoid otherwise).
double space_norm(const SpectralField& u, double q);

/// ||u||_{L^p_t([ta, tb]; L^q_x)}. The interval endpoints must lie on the
/// trajectory grid; the time integral is composite Simpson (with a 3/8 panel
/// when the number of intervals is odd).
double mixed_norm(const Trajectory& traj, double p_t, double q_x, double ta, double tb);

/// ||<lambda>^b <k>^s u~(lambda, k)||_{L^2_lambda l^2_k} for the windowed
/// trajectory chi((t - center)/T) u(t). Throws ResolutionError if the time
/// grid cannot resolve the weighted spectrum.
double xsb_norm(const Trajectory& traj, double s, double b, const NormParams& params);

struct XsbEvaluation {
  double value = 0.0;
  /// Share of the weighted spectrum above half the Nyquist frequency.
  double tail_fraction = 0.0;
};

/// xsb_norm without the resolution check, reporting the tail share instead.
XsbEvaluation xsb_evaluate(const Trajectory& traj, double s, double b, const NormParams& params);

struct OperatorNorms {
  double Yb = 0.0;
  double Zb = 0.0;
  double Sbq = 0.0;
};

/// Y^b (operator norm l^2_{k*} -> L^2_lambda l^2_k), Z^b (Hilbert-Schmidt) and
/// S^{b,q} (l^inf_k L^q_lambda l^2_{k*} with weight <lambda>^{2b/q'}) of a
/// windowed kernel.
OperatorNorms operator_norms(const KernelTrajectory& K, double b, double q, const NormParams& params);

}  // namespace fnls
