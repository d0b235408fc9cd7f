#include "fnls/norms.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fnls/fourier_grid.hpp"

namespace fnls {

namespace {

double smooth_zero(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

double lq_sum(double x, double q) { return q == kInf ? x : std::pow(x, q); }

double dual_exponent(double q) {
  if (q == 1.0) return kInf;
  if (q == kInf) return 1.0;
  return q / (q - 1.0);
}

}  // namespace

double chi(double t) {
  const double a = std::abs(t);
  if (a <= 0.5) return 1.0;
  if (a >= 1.0) return 0.0;
  const double s = 2.0 * (1.0 - a);
  const double up = smooth_zero(s);
  return up / (up + smooth_zero(1.0 - s));
}

double chi_hat(double lambda, double window_T) {
  auto f = [&](double t) { return chi(t / window_T) * std::cos(lambda * t); };
  using boost::math::quadrature::gauss_kronrod;
  const double plateau = gauss_kronrod<double, 61>::integrate(f, 0.0, 0.5 * window_T, 15, 1e-13);
  const double ramp = gauss_kronrod<double, 61>::integrate(f, 0.5 * window_T, window_T, 15, 1e-13);
  return 2.0 * (plateau + ramp);
}

void NormParams::validate() const {
  require(window_T > 0.0, "window_T must be positive");
  require(oversample >= 64, "oversample must be at least 64");
  require(pad >= 1, "pad must be positive");
  require(q >= 1.0, "q must be at least 1");
}

NormParams NormParams::starting_at_zero(double window_T, int oversample) {
  NormParams p;
  p.window_T = window_T;
  p.center = window_T;
  p.oversample = oversample;
  return p;
}

double sobolev_norm(const SpectralField& u, double s) {
  double acc = 0.0;
  for (int k = -u.n_max(); k <= u.n_max(); ++k)
    acc += std::pow(japanese(k), 2.0 * s) * std::norm(u[k]);
  return std::sqrt(acc);
}

double fl_norm(const SpectralField& u, double s, double q) {
  require(q >= 1.0, "q must be at least 1");
  double acc = 0.0;
  for (int k = -u.n_max(); k <= u.n_max(); ++k) {
    const double v = std::pow(japanese(k), s) * std::abs(u[k]);
    acc = q == kInf ? std::max(acc, v) : acc + std::pow(v, q);
  }
  return q == kInf ? acc : std::pow(acc, 1.0 / q);
}

double space_norm(const SpectralField& u, double q) {
  require(q >= 1.0, "q must be at least 1");
  const int refine = q == kInf ? 8 : 4;
  const FourierGrid grid(FourierGrid::smooth_size(refine * (2 * u.n_max() + 1)));
  const auto values = grid.to_physical(u);
  double acc = 0.0;
  for (const auto& v : values) acc = q == kInf ? std::max(acc, std::abs(v)) : acc + std::pow(std::abs(v), q);
  if (q == kInf) return acc;
  return std::pow(2.0 * std::numbers::pi / grid.size() * acc, 1.0 / q);
}

double mixed_norm(const Trajectory& traj, double p_t, double q_x, double ta, double tb) {
  traj.validate();
  require(p_t >= 1.0, "p must be at least 1");
  require(tb > ta, "empty time interval");
  const double ia = (ta - traj.t0) / traj.dt;
  const double ib = (tb - traj.t0) / traj.dt;
  const auto a = static_cast<long>(std::llround(ia));
  const auto b = static_cast<long>(std::llround(ib));
  if (std::abs(ia - a) > 1e-8 || std::abs(ib - b) > 1e-8 || a < 0 || b >= static_cast<long>(traj.size()))
    throw GridMismatch("interval endpoints are not trajectory samples");

  std::vector<double> f;
  for (long i = a; i <= b; ++i)
    f.push_back(lq_sum(space_norm(traj[static_cast<std::size_t>(i)], q_x), p_t));
  if (p_t == kInf) return *std::max_element(f.begin(), f.end());

  const std::size_t intervals = f.size() - 1;
  const double h = traj.dt;
  double acc = 0.0;
  if (intervals == 1) {
    acc = 0.5 * h * (f[0] + f[1]);
  } else {
    // Simpson on an even number of intervals, closing with a 3/8 panel if odd.
    const std::size_t simpson_end = intervals % 2 == 0 ? intervals : intervals - 3;
    for (std::size_t i = 0; i + 2 <= simpson_end; i += 2) acc += h / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
    if (simpson_end != intervals) {
      const std::size_t i = simpson_end;
      acc += 3.0 * h / 8.0 * (f[i] + 3.0 * f[i + 1] + 3.0 * f[i + 2] + f[i + 3]);
    }
  }
  return std::pow(acc, 1.0 / p_t);
}

namespace {

struct TimeWindow {
  std::vector<std::size_t> index;
  std::vector<double> time;
  std::vector<double> weight;
  double tau = 0.0;
};

TimeWindow make_window(double t0, double dt, std::size_t count, const NormParams& p) {
  p.validate();
  if (dt > 1.0 / p.oversample * (1.0 + 1e-9))
    throw ResolutionError("trajectory spacing " + std::to_string(dt) + " is coarser than 1/oversample");
  const auto stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(1.0 / (dt * p.oversample) + 1e-9)));
  const double lo = p.center - p.window_T;
  const double hi = p.center + p.window_T;
  const double t_end = t0 + dt * static_cast<double>(count - 1);
  const double tol = 1e-9 * std::max(1.0, std::abs(hi));
  if (lo < t0 - tol || hi > t_end + tol)
    throw GridMismatch("trajectory does not cover the time window");
  const auto first = static_cast<std::size_t>(std::ceil((lo - t0) / dt - 1e-9));
  TimeWindow w;
  w.tau = dt * static_cast<double>(stride);
  for (std::size_t i = first; i < count; i += stride) {
    const double t = t0 + dt * static_cast<double>(i);
    if (t > hi + tol) break;
    w.index.push_back(i);
    w.time.push_back(t);
    w.weight.push_back(chi((t - p.center) / p.window_T));
  }
  return w;
}

class ModulationTransform {
 public:
  ModulationTransform(const TimeWindow& w, const NormParams& p, double alpha)
      : window_(w), alpha_(alpha), grid_(FourierGrid::smooth_size(
                                       std::max<int>(p.pad * static_cast<int>(std::ceil(2.0 * p.window_T / w.tau - 1e-9)),
                                                     static_cast<int>(w.time.size())))) {
    const int P = grid_.size();
    n_out_ = (P - 1) / 2;
    dlambda_ = 2.0 * std::numbers::pi / (P * w.tau);
    for (int m = -n_out_; m <= n_out_; ++m) lambda_.push_back(m * dlambda_);
  }

  /// F(lambda_m) for g(t_j) = chi_j e^{-i omega t_j} x_j, up to a common phase e^{-i lambda t_first}.
  std::vector<cplx> operator()(const std::vector<cplx>& x, double omega) const {
    std::vector<cplx> g(static_cast<std::size_t>(grid_.size()), 0.0);
    for (std::size_t j = 0; j < x.size(); ++j)
      g[j] = window_.weight[j] * std::polar(1.0, -omega * window_.time[j]) * x[j];
    const SpectralField c = grid_.to_spectral(g, alpha_, n_out_);
    std::vector<cplx> out(c.coeffs().begin(), c.coeffs().end());
    const double scale = window_.tau * grid_.size();
    for (auto& v : out) v *= scale;
    return out;
  }

  const std::vector<double>& lambda() const { return lambda_; }
  double dlambda() const { return dlambda_; }
  double nyquist() const { return std::numbers::pi / window_.tau; }

 private:
  const TimeWindow& window_;
  double alpha_;
  FourierGrid grid_;
  int n_out_ = 0;
  double dlambda_ = 0.0;
  std::vector<double> lambda_;
};

std::vector<double> weights(const ModulationTransform& F, double b) {
  std::vector<double> w;
  w.reserve(F.lambda().size());
  for (double l : F.lambda()) w.push_back(std::pow(japanese(l), 2.0 * b) * F.dlambda());
  return w;
}

double tail_share(const std::vector<double>& tail_energy, double total) {
  double tail = 0.0;
  for (double e : tail_energy) tail += e;
  return total > 0.0 ? tail / total : 0.0;
}

void check_nyquist(const ModulationTransform& F, const std::vector<double>& tail_energy, double total,
                   const NormParams& p) {
  if (tail_share(tail_energy, total) > p.nyquist_tolerance)
    throw ResolutionError("weighted modulation spectrum is not resolved below the Nyquist frequency " +
                          std::to_string(F.nyquist()) + "; increase oversample");
}

}  // namespace

double xsb_norm(const Trajectory& traj, double s, double b, const NormParams& params) {
  const XsbEvaluation e = xsb_evaluate(traj, s, b, params);
  if (e.tail_fraction > params.nyquist_tolerance)
    throw ResolutionError("weighted modulation spectrum is not resolved (tail share " +
                          std::to_string(e.tail_fraction) + "); increase oversample");
  return e.value;
}

XsbEvaluation xsb_evaluate(const Trajectory& traj, double s, double b, const NormParams& params) {
  traj.validate();
  const TimeWindow w = make_window(traj.t0, traj.dt, traj.size(), params);
  const double alpha = traj[0].alpha();
  const ModulationTransform F(w, params, alpha);
  const auto wt = weights(F, b);
  const double half_nyquist = 0.5 * F.nyquist();

  const int n = traj[0].n_max();
  double total = 0.0;
  std::vector<double> tail;
  std::vector<cplx> x(w.index.size());
  for (int k = -n; k <= n; ++k) {
    for (std::size_t j = 0; j < w.index.size(); ++j) x[j] = traj[w.index[j]][k];
    const auto spec = F(x, abs_pow(k, alpha));
    const double ks = std::pow(japanese(k), 2.0 * s);
    double row_tail = 0.0;
    for (std::size_t m = 0; m < spec.size(); ++m) {
      const double e = ks * wt[m] * std::norm(spec[m]);
      total += e;
      if (std::abs(F.lambda()[m]) > half_nyquist) row_tail += e;
    }
    tail.push_back(row_tail);
  }
  return {std::sqrt(total), tail_share(tail, total)};
}

OperatorNorms operator_norms(const KernelTrajectory& K, double b, double q, const NormParams& params) {
  require(K.size() >= 2, "kernel must have at least two samples");
  require(q >= 1.0, "q must be at least 1");
  const TimeWindow w = make_window(K.t0, K.dt, K.size(), params);
  const ModulationTransform F(w, params, K.alpha);
  const auto wt = weights(F, b);
  const double s_exp = 2.0 * b / dual_exponent(q);
  const double half_nyquist = 0.5 * F.nyquist();

  const int n = K.rows_cutoff();
  const auto cols = static_cast<Eigen::Index>(K.columns.size());
  const auto P = static_cast<Eigen::Index>(F.lambda().size());
  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(cols, cols);
  Eigen::MatrixXcd block(P, cols);
  std::vector<cplx> x(w.index.size());
  double total = 0.0;
  double sup_row = 0.0;
  std::vector<double> tail;

  for (int k = -n; k <= n; ++k) {
    const double omega = abs_pow(k, K.alpha);
    for (Eigen::Index c = 0; c < cols; ++c) {
      for (std::size_t j = 0; j < w.index.size(); ++j) x[j] = K.samples[w.index[j]](k + n, c);
      const auto spec = F(x, omega);
      for (Eigen::Index m = 0; m < P; ++m) block(m, c) = spec[static_cast<std::size_t>(m)];
    }
    double row_tail = 0.0;
    double row_lq = 0.0;
    for (Eigen::Index m = 0; m < P; ++m) {
      const double l = F.lambda()[static_cast<std::size_t>(m)];
      const double e = block.row(m).squaredNorm();
      const double we = wt[static_cast<std::size_t>(m)] * e;
      total += we;
      if (std::abs(l) > half_nyquist) row_tail += we;
      const double f = std::pow(japanese(l), s_exp) * std::sqrt(e);
      row_lq = q == kInf ? std::max(row_lq, f) : row_lq + std::pow(f, q) * F.dlambda();
      block.row(m) *= std::sqrt(wt[static_cast<std::size_t>(m)]);
    }
    tail.push_back(row_tail);
    sup_row = std::max(sup_row, q == kInf ? row_lq : std::pow(row_lq, 1.0 / q));
    gram.noalias() += block.adjoint() * block;
  }
  check_nyquist(F, tail, total, params);

  OperatorNorms out;
  out.Zb = std::sqrt(total);
  out.Sbq = sup_row;
  if (cols > 0) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
    out.Yb = std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
  }
  return out;
}

}  // namespace fnls
