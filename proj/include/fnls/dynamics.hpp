#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

#include "fnls/spectral_field.hpp"

namespace fnls {

/// Which right-hand side G in (i d_t + |D|^alpha) u = G is integrated.
enum class Variant {
  /// G = -|u|^2 u, Galerkin-truncated at the cutoff of the state.
  FullCubic,
  /// G = -Pi_n(|Pi_n u|^2 Pi_n u).
  TruncatedHam,
  /// G = -N3(v,v,v) + N0(v,v,v).
  WickGauged,
  /// Linear flow only (used for free evolutions and Picard data).
  Linear,
  /// Time-dependent linear equations (random averaging kernels, psi_L^N).
  HighLowLow,
  /// Derived quantities (differences, gauged copies, iterates).
  Derived,
};

std::string to_string(Variant v);
/// Inverse of to_string; throws InvalidArgument.
Variant parse_variant(const std::string& name);

struct EquationSpec {
  Variant variant = Variant::FullCubic;
  /// Truncation n for TruncatedHam.
  int truncation = 0;
  /// Multiplies the nonlinearity; 0 reduces every variant to the linear flow.
  double nonlinear_scale = 1.0;
};

/// Uniformly sampled sequence of fields, all with the same cutoff and alpha.
struct Trajectory {
  std::vector<SpectralField> fields;
  double t0 = 0.0;
  double dt = 1.0;
  Variant variant = Variant::Derived;

  std::size_t size() const { return fields.size(); }
  double time(std::size_t i) const { return t0 + dt * static_cast<double>(i); }
  double t_end() const { return time(fields.size() - 1); }
  const SpectralField& operator[](std::size_t i) const { return fields[i]; }

  /// Throws unless non-empty, dt > 0 and all fields share (n_max, alpha).
  void validate() const;
};

/// Every `stride`-th sample.
Trajectory subsample(const Trajectory& traj, std::size_t stride);
/// Pointwise a - b on a shared grid (cutoffs are padded to the larger one).
Trajectory difference(const Trajectory& a, const Trajectory& b);
/// Each field viewed at cutoff n.
Trajectory with_cutoff(const Trajectory& traj, int n);

/// S_alpha(t) u: u^(k) -> e^{i t |k|^alpha} u^(k).
SpectralField linear_propagate(const SpectralField& u, double t);

/// Exact linear flow sampled on t0 + i dt, i = 0..steps.
Trajectory linear_trajectory(const SpectralField& u0, double t0, double dt, std::size_t steps);

/// Precomputed e^{i |k|^alpha h} and e^{i |k|^alpha h / 2}.
class PhaseTable {
 public:
  PhaseTable(double alpha, int n_max, double h);
  void apply_full(SpectralField& u) const;
  void apply_half(SpectralField& u) const;
  int n_max() const { return n_max_; }

 private:
  int n_max_;
  std::vector<cplx> full_;
  std::vector<cplx> half_;
};

/// Stage position within a step: 0 -> t, 1 -> t + h/2, 2 -> t + h.
using StageRhs = std::function<SpectralField(int stage, const SpectralField& u)>;

/// One step of the fourth-order Lawson (integrating-factor RK4) scheme for
/// du/dt = i|D|^alpha u + R(t, u). The linear phase is applied exactly.
SpectralField lawson_rk4_step(const SpectralField& u, double h, const PhaseTable& phases,
                              const StageRhs& rhs);

/// Nonlinear term R(u) = -i G(u) for an autonomous variant.
SpectralField autonomous_rhs(const EquationSpec& eq, const SpectralField& u);

/// Integrates from t = 0 to T with step dt and keeps every `stride`-th state.
/// Throws NonFiniteState if a coefficient overflows.
Trajectory evolve(const SpectralField& u0, double T, double dt, const EquationSpec& eq,
                  std::size_t stride = 1);

/// Number of steps dt needed to reach T; throws unless dt divides T.
std::size_t step_count(double T, double dt);

/// v(t) = u(t) exp(-i t M(u(t)) / pi). The sign is the one under which the
/// Wick-ordered equation is the gauged form of the cubic equation.
Trajectory gauge_map(const Trajectory& traj);
/// Undoes gauge_map.
Trajectory inverse_gauge_map(const Trajectory& traj);

/// phi -> Pi_N N3(phi, w, w) for a fixed background w, evaluated in
/// O(M log M) through N3 = phi |w|^2 - <phi,w> w - |w|_2^2 phi + N0(phi,w,w).
class HighLowLowOperator {
 public:
  HighLowLowOperator(const SpectralField& background, int n_out);
  SpectralField apply(const SpectralField& phi) const;

 private:
  SpectralField background_;
  int n_out_;
  double background_l2_;
  int grid_size_;
  std::vector<cplx> modulus_squared_;
};

/// Time-sampled kernel H_{k k*}(t): rows |k| <= N, columns the shell modes k*.
struct KernelTrajectory {
  Dyadic N = Dyadic::half();
  Dyadic L = Dyadic::half();
  double alpha = 2.0;
  double t0 = 0.0;
  double dt = 1.0;
  std::vector<int> columns;
  std::vector<Eigen::MatrixXcd> samples;

  int rows_cutoff() const { return N.is_half() ? 0 : N.value(); }
  std::size_t size() const { return samples.size(); }
  double time(std::size_t i) const { return t0 + dt * static_cast<double>(i); }
  cplx entry(std::size_t i, int k, int column) const {
    return samples[i](k + rows_cutoff(), column);
  }
  /// Contracts the kernel against shell data: psi^(t,k) = sum_k* H_{kk*} c_k*.
  Trajectory apply(const SpectralField& shell_data) const;
};

struct KernelOptions {
  /// Keep every `stride`-th kernel sample.
  std::size_t stride = 1;
  /// Exponent in the L < N^(1-delta) gap condition.
  double delta = 0.05;
  /// Skip the gap condition (used when the ladder itself is being tested).
  bool enforce_gap = true;
};

/// Solves (i d_t + |D|^alpha) phi = -2 Pi_N N3(phi, Pi_L v_L, Pi_L v_L) column by
/// column with data e_{k*}, N/2 < |k*| <= N. The background trajectory vL must
/// start at t0 with spacing h/2 where h is the kernel step; the kernel is
/// computed on the grid t0 + i h for as many steps as vL covers. For L = 1/2
/// the kernel is the free phase e^{i t |k|^alpha} 1_{k = k*}.
KernelTrajectory solve_kernel(Dyadic N, Dyadic L, const Trajectory& vL,
                              const KernelOptions& opts = {});
/// Same equation for one initial datum (any function supported in |k| <= N).
Trajectory solve_high_low_low(Dyadic N, Dyadic L, const Trajectory& vL,
                              const SpectralField& data, std::size_t stride = 1);

/// h^{N,L} = H^{N,L} - H^{N,L/2} sample by sample.
KernelTrajectory kernel_difference(const KernelTrajectory& upper, const KernelTrajectory& lower);

}  // namespace fnls
