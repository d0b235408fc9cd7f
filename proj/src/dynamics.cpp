#include "fnls/dynamics.hpp"

#include <cmath>
#include <numbers>

#include "fnls/fourier_grid.hpp"
#include "fnls/nonlinear.hpp"
#include "fnls/parallel.hpp"

namespace fnls {

namespace {
constexpr cplx kI{0.0, 1.0};

bool same_spacing(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }
}  // namespace

std::string to_string(Variant v) {
  switch (v) {
    case Variant::FullCubic: return "full_cubic";
    case Variant::TruncatedHam: return "truncated_ham";
    case Variant::WickGauged: return "wick_gauged";
    case Variant::Linear: return "linear";
    case Variant::HighLowLow: return "high_low_low";
    case Variant::Derived: return "derived";
  }
  return "unknown";
}

Variant parse_variant(const std::string& name) {
  for (auto v : {Variant::FullCubic, Variant::TruncatedHam, Variant::WickGauged, Variant::Linear,
                 Variant::HighLowLow, Variant::Derived})
    if (to_string(v) == name) return v;
  throw InvalidArgument("unknown variant '" + name + "'");
}

void Trajectory::validate() const {
  require(!fields.empty(), "trajectory is empty");
  require(dt > 0.0, "trajectory spacing must be positive");
  for (const auto& f : fields) {
    if (f.n_max() != fields.front().n_max() || f.alpha() != fields.front().alpha())
      throw GridMismatch("trajectory fields must share cutoff and alpha");
  }
}

Trajectory subsample(const Trajectory& traj, std::size_t stride) {
  require(stride >= 1, "stride must be positive");
  Trajectory out{{}, traj.t0, traj.dt * static_cast<double>(stride), traj.variant};
  for (std::size_t i = 0; i < traj.size(); i += stride) out.fields.push_back(traj.fields[i]);
  return out;
}

Trajectory difference(const Trajectory& a, const Trajectory& b) {
  if (a.size() != b.size() || !same_spacing(a.dt, b.dt) || std::abs(a.t0 - b.t0) > 1e-12)
    throw GridMismatch("trajectories do not share a time grid");
  const int n = std::max(a[0].n_max(), b[0].n_max());
  Trajectory out{{}, a.t0, a.dt, Variant::Derived};
  out.fields.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out.fields.push_back(a[i].with_cutoff(n) - b[i].with_cutoff(n));
  return out;
}

Trajectory with_cutoff(const Trajectory& traj, int n) {
  Trajectory out{{}, traj.t0, traj.dt, traj.variant};
  out.fields.reserve(traj.size());
  for (const auto& f : traj.fields) out.fields.push_back(f.with_cutoff(n));
  return out;
}

SpectralField linear_propagate(const SpectralField& u, double t) {
  SpectralField out = u;
  for (int k = -u.n_max(); k <= u.n_max(); ++k)
    out[k] *= std::polar(1.0, t * abs_pow(k, u.alpha()));
  return out;
}

Trajectory linear_trajectory(const SpectralField& u0, double t0, double dt, std::size_t steps) {
  Trajectory out{{}, t0, dt, Variant::Linear};
  out.fields.reserve(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) out.fields.push_back(linear_propagate(u0, out.time(i)));
  return out;
}

PhaseTable::PhaseTable(double alpha, int n_max, double h) : n_max_(n_max) {
  full_.reserve(static_cast<std::size_t>(2 * n_max + 1));
  half_.reserve(full_.capacity());
  for (int k = -n_max; k <= n_max; ++k) {
    const double w = abs_pow(k, alpha);
    full_.push_back(std::polar(1.0, w * h));
    half_.push_back(std::polar(1.0, 0.5 * w * h));
  }
}

void PhaseTable::apply_full(SpectralField& u) const {
  auto c = u.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= full_[i];
}

void PhaseTable::apply_half(SpectralField& u) const {
  auto c = u.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= half_[i];
}

SpectralField lawson_rk4_step(const SpectralField& u, double h, const PhaseTable& phases,
                              const StageRhs& rhs) {
  if (phases.n_max() != u.n_max()) throw GridMismatch("phase table cutoff differs from state");
  const SpectralField k1 = rhs(0, u);

  SpectralField stage = u + (0.5 * h) * k1;
  phases.apply_half(stage);
  const SpectralField k2 = rhs(1, stage);

  SpectralField u_half = u;
  phases.apply_half(u_half);
  stage = u_half + (0.5 * h) * k2;
  const SpectralField k3 = rhs(1, stage);

  SpectralField k3_half = k3;
  phases.apply_half(k3_half);
  SpectralField u_full = u_half;
  phases.apply_half(u_full);
  stage = u_full + h * k3_half;
  const SpectralField k4 = rhs(2, stage);

  SpectralField k1_full = k1;
  phases.apply_full(k1_full);
  SpectralField k23 = k2 + k3;
  phases.apply_half(k23);
  SpectralField out = u_full;
  out += (h / 6.0) * (k1_full + 2.0 * k23 + k4);
  return out;
}

SpectralField autonomous_rhs(const EquationSpec& eq, const SpectralField& u) {
  const cplx scale = kI * eq.nonlinear_scale;
  switch (eq.variant) {
    case Variant::FullCubic:
      return cubic_product(u, u, u, u.n_max()) * scale;
    case Variant::TruncatedHam: {
      require(eq.truncation >= 0, "truncation must be non-negative");
      const int n = std::min(eq.truncation, u.n_max());
      const SpectralField low = u.with_cutoff(n);
      return cubic_product(low, low, low, n).with_cutoff(u.n_max()) * scale;
    }
    case Variant::WickGauged:
      // R = -i(-N3 + N0).
      return wick_nonlinearity(u) * (-scale);
    case Variant::Linear:
      return SpectralField(u.alpha(), u.n_max());
    default:
      throw InvalidArgument("variant " + to_string(eq.variant) + " is not autonomous");
  }
}

std::size_t step_count(double T, double dt) {
  require(dt > 0.0, "time step must be positive");
  require(T >= 0.0, "final time must be non-negative");
  const double ratio = T / dt;
  const double rounded = std::round(ratio);
  require(std::abs(ratio - rounded) <= 1e-9 * std::max(1.0, ratio), "dt must divide T");
  return static_cast<std::size_t>(rounded);
}

Trajectory evolve(const SpectralField& u0, double T, double dt, const EquationSpec& eq,
                  std::size_t stride) {
  require(stride >= 1, "stride must be positive");
  const std::size_t steps = step_count(T, dt);
  const PhaseTable phases(u0.alpha(), u0.n_max(), dt);
  const StageRhs rhs = [&eq](int, const SpectralField& u) { return autonomous_rhs(eq, u); };

  Trajectory out{{u0}, 0.0, dt * static_cast<double>(stride), eq.variant};
  SpectralField u = u0;
  for (std::size_t s = 1; s <= steps; ++s) {
    u = lawson_rk4_step(u, dt, phases, rhs);
    if (!u.all_finite())
      throw NonFiniteState("non-finite coefficient at t=" + std::to_string(dt * static_cast<double>(s)));
    if (s % stride == 0) out.fields.push_back(u);
  }
  return out;
}

namespace {

Trajectory gauge_with_sign(const Trajectory& traj, double sign) {
  Trajectory out = traj;
  out.variant = Variant::Derived;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double t = traj.time(i);
    out.fields[i] *= std::polar(1.0, sign * t * mass(traj[i]) / std::numbers::pi);
  }
  return out;
}

}  // namespace

Trajectory gauge_map(const Trajectory& traj) { return gauge_with_sign(traj, -1.0); }
Trajectory inverse_gauge_map(const Trajectory& traj) { return gauge_with_sign(traj, +1.0); }

HighLowLowOperator::HighLowLowOperator(const SpectralField& background, int n_out)
    : background_(background), n_out_(n_out), background_l2_(l2_squared(background)) {
  const int lb = background.n_max();
  grid_size_ = FourierGrid::smooth_size(std::max(2 * n_out_ + 2 * lb + 1, 2 * std::max(n_out_, lb) + 1));
  const FourierGrid grid(grid_size_);
  modulus_squared_ = grid.to_physical(background_);
  for (auto& z : modulus_squared_) z = std::norm(z);
}

SpectralField HighLowLowOperator::apply(const SpectralField& phi) const {
  require(phi.n_max() <= n_out_, "operand exceeds operator cutoff");
  const FourierGrid grid(grid_size_);
  auto values = grid.to_physical(phi);
  for (std::size_t j = 0; j < values.size(); ++j) values[j] *= modulus_squared_[j];
  SpectralField out = grid.to_spectral(values, phi.alpha(), n_out_);
  const cplx overlap = inner(phi, background_);
  const int lb = std::min(background_.n_max(), n_out_);
  for (int k = -lb; k <= lb; ++k) out[k] -= overlap * background_[k];
  const int m = phi.n_max();
  for (int k = -m; k <= m; ++k) out[k] -= background_l2_ * phi[k];
  const int m0 = std::min(m, background_.n_max());
  for (int k = -m0; k <= m0; ++k) out[k] += phi[k] * std::norm(background_[k]);
  return out;
}

namespace {

struct BackgroundGrid {
  double h;
  std::size_t steps;
};

BackgroundGrid check_background(Dyadic N, Dyadic L, const Trajectory& vL) {
  vL.validate();
  require(!N.is_half(), "kernel scale N must be at least 1");
  require(vL.size() >= 3 && (vL.size() - 1) % 2 == 0,
          "background must have an even number of half steps");
  if (!L.is_half() && vL[0].n_max() < L.value())
    throw GridMismatch("background cutoff below L");
  return {2.0 * vL.dt, (vL.size() - 1) / 2};
}

std::vector<HighLowLowOperator> stage_operators(Dyadic N, Dyadic L, const Trajectory& vL,
                                                std::size_t step) {
  std::vector<HighLowLowOperator> ops;
  ops.reserve(3);
  for (std::size_t j = 0; j < 3; ++j)
    ops.emplace_back(vL[2 * step + j].with_cutoff(L.value()), N.value());
  return ops;
}

// R(phi) = -i G with G = -2 Pi_N N3(phi, w, w), i.e. R = 2i Pi_N N3(phi, w, w).
SpectralField high_low_low_rhs(const HighLowLowOperator& op, const SpectralField& phi) {
  return op.apply(phi) * cplx(0.0, 2.0);
}

}  // namespace

KernelTrajectory solve_kernel(Dyadic N, Dyadic L, const Trajectory& vL, const KernelOptions& opts) {
  require(opts.stride >= 1, "stride must be positive");
  const auto [h, steps] = check_background(N, L, vL);
  if (opts.enforce_gap && !L.is_half())
    require(L.real() < std::pow(N.real(), 1.0 - opts.delta), "kernel requires L < N^(1-delta)");

  const int n = N.value();
  const double alpha = vL[0].alpha();
  KernelTrajectory K;
  K.N = N;
  K.L = L;
  K.alpha = alpha;
  K.t0 = vL.t0;
  K.dt = h * static_cast<double>(opts.stride);
  K.columns = N.shell_modes();
  const auto ncols = static_cast<Eigen::Index>(K.columns.size());
  const Eigen::Index nrows = 2 * n + 1;

  std::vector<SpectralField> cols;
  cols.reserve(K.columns.size());
  for (int ks : K.columns) cols.push_back(SpectralField::mode(alpha, n, ks));

  auto snapshot = [&] {
    Eigen::MatrixXcd H(nrows, ncols);
    for (Eigen::Index c = 0; c < ncols; ++c) {
      const auto& col = cols[static_cast<std::size_t>(c)];
      for (Eigen::Index r = 0; r < nrows; ++r) H(r, c) = col.coeffs()[static_cast<std::size_t>(r)];
    }
    K.samples.push_back(std::move(H));
  };
  snapshot();

  const PhaseTable phases(alpha, n, h);
  for (std::size_t s = 0; s < steps; ++s) {
    if (L.is_half()) {
      for (auto& col : cols) phases.apply_full(col);
    } else {
      const auto ops = stage_operators(N, L, vL, s);
      const StageRhs rhs = [&ops](int stage, const SpectralField& phi) {
        return high_low_low_rhs(ops[static_cast<std::size_t>(stage)], phi);
      };
      parallel_for(cols.size(), [&](std::size_t c) { cols[c] = lawson_rk4_step(cols[c], h, phases, rhs); });
    }
    if ((s + 1) % opts.stride == 0) snapshot();
  }
  return K;
}

Trajectory solve_high_low_low(Dyadic N, Dyadic L, const Trajectory& vL, const SpectralField& data,
                              std::size_t stride) {
  require(stride >= 1, "stride must be positive");
  const auto [h, steps] = check_background(N, L, vL);
  const int n = N.value();
  require(data.n_max() <= n, "initial datum exceeds cutoff N");
  SpectralField phi = data.with_cutoff(n);
  Trajectory out{{phi}, vL.t0, h * static_cast<double>(stride), Variant::HighLowLow};
  const PhaseTable phases(phi.alpha(), n, h);
  for (std::size_t s = 0; s < steps; ++s) {
    if (L.is_half()) {
      phases.apply_full(phi);
    } else {
      const auto ops = stage_operators(N, L, vL, s);
      phi = lawson_rk4_step(phi, h, phases, [&ops](int stage, const SpectralField& f) {
        return high_low_low_rhs(ops[static_cast<std::size_t>(stage)], f);
      });
    }
    if (!phi.all_finite()) throw NonFiniteState("non-finite coefficient in high-low-low solve");
    if ((s + 1) % stride == 0) out.fields.push_back(phi);
  }
  return out;
}

Trajectory KernelTrajectory::apply(const SpectralField& shell_data) const {
  const int n = rows_cutoff();
  Eigen::VectorXcd c(static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) c(static_cast<Eigen::Index>(j)) = shell_data.at(columns[j]);
  Trajectory out{{}, t0, dt, Variant::HighLowLow};
  out.fields.reserve(samples.size());
  for (const auto& H : samples) {
    const Eigen::VectorXcd col = H * c;
    SpectralField f(alpha, n);
    for (int k = -n; k <= n; ++k) f[k] = col(k + n);
    out.fields.push_back(std::move(f));
  }
  return out;
}

KernelTrajectory kernel_difference(const KernelTrajectory& upper, const KernelTrajectory& lower) {
  if (upper.N != lower.N || upper.size() != lower.size() || !same_spacing(upper.dt, lower.dt))
    throw GridMismatch("kernels do not share scale N or time grid");
  KernelTrajectory out = upper;
  for (std::size_t i = 0; i < out.size(); ++i) out.samples[i] -= lower.samples[i];
  return out;
}

}  // namespace fnls
