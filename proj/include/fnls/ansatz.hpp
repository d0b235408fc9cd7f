#pragma once

#include <map>
#include <string>
#include <vector>

#include "fnls/dynamics.hpp"
#include "fnls/picard.hpp"
#include "fnls/random_data.hpp"
#include "fnls/stats.hpp"

namespace fnls {

using SolutionMap = std::map<Dyadic, Trajectory>;

/// v_N for every dyadic N in 1/2..N_max: Wick-gauged solutions with data
/// Pi_N phi, phi = sample_gaussian(N_max, alpha, seed), all on the grid i dt
/// and carried at the common cutoff (0 selects 2 N_max).
SolutionMap dyadic_solutions(const SeedSpec& seed, Dyadic N_max, double T, double dt, double alpha,
                             int cutoff = 0);

enum class PsiRoute {
  /// Solve the high-low-low equation once with the shell data as initial datum.
  Direct,
  /// Solve for the kernel H^{N,L} column by column and contract.
  Kernel,
};

struct AnsatzOptions {
  double delta = 0.05;
  PsiRoute route = PsiRoute::Direct;
  /// Replace every background v_L by zero (test hook).
  bool zero_background = false;
};

/// Decomposition y_N = f_N + sum_{1 <= L <= L_N} zeta_L^N + w_N. All
/// trajectories live on the grid i (2 dt) at the cutoff of the solutions.
struct AnsatzBundle {
  Dyadic N = Dyadic::half();
  Dyadic L_N = Dyadic::half();
  double T = 0.0;
  double delta = 0.05;
  Trajectory yN;
  Trajectory fN;
  Trajectory wN;
  std::map<Dyadic, Trajectory> psi;
  std::map<Dyadic, Trajectory> zeta;
  /// Filled only by the kernel route.
  std::map<Dyadic, KernelTrajectory> kernels;
  bool zero_background = false;
};

AnsatzBundle build_ansatz(Dyadic N, const SolutionMap& solutions, const AnsatzOptions& opts = {});

/// max over grid times of max_k |y - f - sum zeta - w|.
double telescoping_residual(const AnsatzBundle& bundle);

/// sup_t || S(-t) w(t) - w(0) + i int_0^t S(-t') F(t') dt' ||_{l^2} where
/// (i d_t + |D|^alpha) w = F is the equation satisfied by w_N; the integral is
/// cumulative Simpson on the bundle grid.
double residual_w(const AnsatzBundle& bundle, const SolutionMap& solutions);

/// Fraction of sum_t sum |h_{kk*}(t)|^2 carried by |k - k*| > width.
double kernel_offdiagonal_fraction(const KernelTrajectory& h, double width);

struct ScalingOptions {
  double delta = 0.05;
  /// Loss exponent in the Sobolev and Fourier-Lebesgue norms of zeta.
  double eps = 0.05;
  /// Modulation exponent of the X^{0,b} proxy for w_N.
  double b = 0.55;
};

struct ScalingRow {
  long long N = 0;
  /// -1 stands for the scale 1/2.
  double L = 0.0;
  std::string norm;
  double value = 0.0;
};

struct ScalingFit {
  std::string norm;
  /// "N" (slope in N at fixed L) or "L" (slope in L at fixed N).
  std::string variable;
  double fixed = 0.0;
  LinearFit fit;
};

struct ScalingTable {
  std::vector<ScalingRow> rows;
  std::vector<ScalingFit> fits;
};

/// Norms of zeta_L^N (L^4_t L^inf_x, H^{alpha-1-eps} and FL^{alpha/2-eps,inf},
/// sup in time) and the X^{0,b} proxy of w_N for every N in N_list, with log-log
/// slopes in N at fixed L and in L at fixed N. Zero rows (L = 1/2) are kept in
/// the table and excluded from fits.
ScalingTable scaling_study(const SolutionMap& solutions, const std::vector<Dyadic>& N_list,
                           const ScalingOptions& opts = {});

/// log-log slope in N of ||zeta_L^N||_{L^4 L^inf} at fixed L.
double zeta_slope_in_N(const SolutionMap& solutions, const std::vector<Dyadic>& N_list, Dyadic L,
                       double delta = 0.05);

/// margin(alpha) = (alpha - 1) + 2 s0 nu0 - s0, s0 = 1/2 - alpha/4,
/// nu0 = min(s0, 7(alpha - 1)/4).
double constraint_margin(double alpha);
Rational constraint_margin(const Rational& alpha);
/// (31 - sqrt(233)) / 14.
double alpha0();
/// Root of constraint_margin on (1.05, 1.125) by bracketing.
double alpha0_numeric();

/// Finite sum of c sigma^e with exact rational coefficients and exponents.
/// Comparisons are decided in the limit sigma -> 0+, i.e. by the sign of the
/// lowest-exponent nonzero term.
class SigmaPoly {
 public:
  SigmaPoly() = default;
  static SigmaPoly constant(const Rational& c);
  static SigmaPoly term(const Rational& c, const Rational& exponent);

  SigmaPoly& operator+=(const SigmaPoly& o);
  SigmaPoly& operator-=(const SigmaPoly& o);
  SigmaPoly& operator*=(const Rational& c);
  friend SigmaPoly operator+(SigmaPoly a, const SigmaPoly& b) { return a += b; }
  friend SigmaPoly operator-(SigmaPoly a, const SigmaPoly& b) { return a -= b; }
  friend SigmaPoly operator*(const Rational& c, SigmaPoly a) { return a *= c; }

  /// -1, 0 or +1 for sigma -> 0+.
  int sign() const;
  bool is_zero() const { return terms_.empty(); }
  const std::map<Rational, Rational>& terms() const { return terms_; }
  std::string str() const;

 private:
  std::map<Rational, Rational> terms_;  // exponent -> coefficient
};

bool less_than(const SigmaPoly& a, const SigmaPoly& b);
SigmaPoly min(const SigmaPoly& a, const SigmaPoly& b);

/// The constant ladder as functions of sigma, at a rational alpha.
struct NumericHierarchy {
  Rational alpha;
  SigmaPoly b0, b, b1, theta, q_inv, q_dual, kappa, eps1, eps2, delta, delta0, s, nu;

  static NumericHierarchy standard(const Rational& alpha);
};

struct HierarchyCheck {
  std::string name;
  bool holds = false;
  /// rhs - lhs (positive when a strict inequality lhs < rhs holds).
  std::string gap;
};

struct HierarchyReport {
  std::vector<HierarchyCheck> checks;
  bool all_hold() const;
};

/// nu <= min{s, 7(alpha-1)/4} - 100(eps1 + eps2); eps1 > 100(b1 - 1/2 + 1/q + theta);
/// b0 < b < b1 < q'/2.
HierarchyReport hierarchy_checks(const NumericHierarchy& h);

}  // namespace fnls
