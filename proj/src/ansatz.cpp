#include "fnls/ansatz.hpp"

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <optional>
#include <sstream>

#include "fnls/nonlinear.hpp"
#include "fnls/norms.hpp"
#include "fnls/parallel.hpp"

namespace fnls {

namespace {

constexpr cplx kI{0.0, 1.0};

Trajectory zero_trajectory(const Trajectory& grid, double alpha, int n) {
  return {std::vector<SpectralField>(grid.size(), SpectralField(alpha, n)), grid.t0, grid.dt, Variant::Derived};
}

const Trajectory& lookup(const SolutionMap& solutions, Dyadic L) {
  auto it = solutions.find(L);
  if (it == solutions.end()) throw InvalidArgument("missing low-frequency trajectory v_" + L.label());
  return it->second;
}

std::vector<Dyadic> ladder_from_one(Dyadic upper) {
  std::vector<Dyadic> out;
  if (upper.is_half()) return out;
  for (Dyadic L : dyadic_ladder(upper))
    if (!L.is_half()) out.push_back(L);
  return out;
}

double sup_in_time(const Trajectory& traj, auto&& norm) {
  double out = 0.0;
  for (const auto& f : traj.fields) out = std::max(out, norm(f));
  return out;
}

}  // namespace

SolutionMap dyadic_solutions(const SeedSpec& seed, Dyadic N_max, double T, double dt, double alpha,
                             int cutoff) {
  require(!N_max.is_half(), "N_max must be at least 1");
  const int K = cutoff > 0 ? cutoff : 2 * N_max.value();
  require(K >= N_max.value(), "computational cutoff below N_max");
  const SpectralField phi = sample_gaussian(N_max.value(), alpha, seed);
  const auto ladder = dyadic_ladder(N_max);
  std::vector<std::optional<Trajectory>> out(ladder.size());
  parallel_for(ladder.size(), [&](std::size_t i) {
    const int n = ladder[i].is_half() ? 0 : ladder[i].value();
    out[i] = evolve(project_cutoff(phi, n).with_cutoff(K), T, dt, {Variant::WickGauged});
  });
  SolutionMap solutions;
  for (std::size_t i = 0; i < ladder.size(); ++i) solutions.emplace(ladder[i], std::move(*out[i]));
  return solutions;
}

AnsatzBundle build_ansatz(Dyadic N, const SolutionMap& solutions, const AnsatzOptions& opts) {
  require(!N.is_half(), "ansatz scale N must be at least 1");
  const Trajectory& vN = lookup(solutions, N);
  const Trajectory& vHalf = lookup(solutions, N.halved());
  vN.validate();
  require((vN.size() - 1) % 2 == 0, "solutions need an even number of steps");
  const int K = vN[0].n_max();
  const double alpha = vN[0].alpha();
  const std::size_t steps = (vN.size() - 1) / 2;

  AnsatzBundle B;
  B.N = N;
  B.delta = opts.delta;
  B.L_N = largest_dyadic_below(N, opts.delta);
  B.zero_background = opts.zero_background;
  B.yN = difference(subsample(vN, 2), subsample(with_cutoff(vHalf, K), 2));
  B.T = B.yN.t_end();

  const SpectralField shell = project(vN[0], N, ProjectionMode::Shell).with_cutoff(N.value());
  B.fN = with_cutoff(linear_trajectory(shell, vN.t0, 2.0 * vN.dt, steps), K);
  B.psi.emplace(Dyadic::half(), B.fN);

  const auto rungs = ladder_from_one(B.L_N);
  std::vector<std::optional<Trajectory>> psi(rungs.size());
  std::vector<std::optional<KernelTrajectory>> kernels(rungs.size());
  parallel_for(rungs.size(), [&](std::size_t i) {
    const Dyadic L = rungs[i];
    const Trajectory background =
        opts.zero_background ? zero_trajectory(vN, alpha, L.value()) : lookup(solutions, L);
    if (opts.route == PsiRoute::Direct) {
      psi[i] = with_cutoff(solve_high_low_low(N, L, background, shell), K);
    } else {
      kernels[i] = solve_kernel(N, L, background, {1, opts.delta, true});
      psi[i] = with_cutoff(kernels[i]->apply(shell), K);
    }
  });
  for (std::size_t i = 0; i < rungs.size(); ++i) {
    B.psi.emplace(rungs[i], std::move(*psi[i]));
    if (kernels[i]) B.kernels.emplace(rungs[i], std::move(*kernels[i]));
  }

  B.zeta.emplace(Dyadic::half(), zero_trajectory(B.fN, alpha, K));
  for (Dyadic L : rungs) B.zeta.emplace(L, difference(B.psi.at(L), B.psi.at(L.halved())));
  B.wN = difference(B.yN, B.psi.at(B.L_N));
  return B;
}

double telescoping_residual(const AnsatzBundle& B) {
  double out = 0.0;
  for (std::size_t i = 0; i < B.yN.size(); ++i) {
    SpectralField r = B.yN[i] - B.fN[i] - B.wN[i];
    for (const auto& [L, z] : B.zeta) r -= z[i];
    for (const auto& c : r.coeffs()) out = std::max(out, std::abs(c));
  }
  return out;
}

double residual_w(const AnsatzBundle& B, const SolutionMap& solutions) {
  const Trajectory vN = subsample(lookup(solutions, B.N), 2);
  const int K = vN[0].n_max();
  const Trajectory vHalf = subsample(with_cutoff(lookup(solutions, B.N.halved()), K), 2);
  if (vN.size() != B.wN.size()) throw GridMismatch("solutions do not match the bundle grid");
  const double alpha = vN[0].alpha();
  const std::size_t count = vN.size();

  std::vector<SpectralField> forcing(count, SpectralField(alpha, K));
  parallel_for(count, [&](std::size_t i) {
    SpectralField F = wick_nonlinearity(vN[i]) - wick_nonlinearity(vHalf[i]);
    if (!B.L_N.is_half()) {
      const int l = B.L_N.value();
      const SpectralField bg = B.zero_background ? SpectralField(alpha, l)
                                                 : lookup(solutions, B.L_N)[2 * i].with_cutoff(l);
      const HighLowLowOperator op(bg, B.N.value());
      F += (2.0 * op.apply(B.psi.at(B.L_N)[i].with_cutoff(B.N.value()))).with_cutoff(K);
    }
    forcing[i] = std::move(F);
  });

  std::vector<double> sq(count, 0.0);
  std::vector<cplx> g(count);
  for (int k = -K; k <= K; ++k) {
    const double w = abs_pow(k, alpha);
    for (std::size_t i = 0; i < count; ++i) g[i] = std::polar(1.0, -w * vN.time(i)) * forcing[i][k];
    const auto integral = cumulative_simpson(g, vN.dt);
    const cplx a0 = std::polar(1.0, -w * vN.time(0)) * B.wN[0][k];
    for (std::size_t i = 0; i < count; ++i) {
      const cplx a = std::polar(1.0, -w * vN.time(i)) * B.wN[i][k];
      sq[i] += std::norm(a - a0 + kI * integral[i]);
    }
  }
  double out = 0.0;
  for (double v : sq) out = std::max(out, std::sqrt(v));
  return out;
}

double kernel_offdiagonal_fraction(const KernelTrajectory& h, double width) {
  const int n = h.rows_cutoff();
  double off = 0.0;
  double total = 0.0;
  for (const auto& H : h.samples) {
    for (Eigen::Index c = 0; c < H.cols(); ++c) {
      const int ks = h.columns[static_cast<std::size_t>(c)];
      for (int k = -n; k <= n; ++k) {
        const double e = std::norm(H(k + n, c));
        total += e;
        if (std::abs(k - ks) > width) off += e;
      }
    }
  }
  return total > 0.0 ? off / total : 0.0;
}

ScalingTable scaling_study(const SolutionMap& solutions, const std::vector<Dyadic>& N_list,
                           const ScalingOptions& opts) {
  ScalingTable table;
  const char* zeta_norms[] = {"zeta_L4Linf", "zeta_H", "zeta_FL"};
  // values[norm][(N, L)]
  std::map<std::string, std::map<std::pair<Dyadic, Dyadic>, double>> values;
  for (Dyadic N : N_list) {
    const AnsatzBundle B = build_ansatz(N, solutions, {opts.delta, PsiRoute::Direct, false});
    const double alpha = B.yN[0].alpha();
    for (const auto& [L, z] : B.zeta) {
      const double v[] = {
          mixed_norm(z, 4.0, kInf, z.t0, z.t_end()),
          sup_in_time(z, [&](const SpectralField& f) { return sobolev_norm(f, alpha - 1.0 - opts.eps); }),
          sup_in_time(z, [&](const SpectralField& f) { return fl_norm(f, alpha / 2.0 - opts.eps, kInf); }),
      };
      for (int m = 0; m < 3; ++m) {
        table.rows.push_back({N.value(), L.is_half() ? -1.0 : L.real(), zeta_norms[m], v[m]});
        if (!L.is_half()) values[zeta_norms[m]][{N, L}] = v[m];
      }
    }
    NormParams p;
    p.window_T = 0.5 * B.T;
    p.center = 0.5 * B.T;
    p.oversample = std::max(64, static_cast<int>(std::floor(1.0 / B.wN.dt + 1e-9)));
    // The highest modes of w oscillate faster than the grid resolves for
    // large N, so the tail share is reported next to the value, not enforced.
    const XsbEvaluation wx = xsb_evaluate(B.wN, 0.0, opts.b, p);
    const double Lcol = B.L_N.is_half() ? -1.0 : B.L_N.real();
    table.rows.push_back({N.value(), Lcol, "w_X0b", wx.value});
    table.rows.push_back({N.value(), Lcol, "w_X0b_tail_share", wx.tail_fraction});
    values["w_X0b"][{N, Dyadic::half()}] = wx.value;
  }

  for (const auto& [name, by_pair] : values) {
    std::map<Dyadic, std::pair<std::vector<double>, std::vector<double>>> by_L, by_N;
    for (const auto& [key, v] : by_pair) {
      if (v <= 0.0) continue;
      by_L[key.second].first.push_back(std::log(key.first.real()));
      by_L[key.second].second.push_back(std::log(v));
      if (!key.second.is_half()) {
        by_N[key.first].first.push_back(std::log(key.second.real()));
        by_N[key.first].second.push_back(std::log(v));
      }
    }
    for (const auto& [L, xy] : by_L)
      if (xy.first.size() >= 2)
        table.fits.push_back({name, "N", L.is_half() ? 0.0 : L.real(), linear_fit(xy.first, xy.second)});
    for (const auto& [N, xy] : by_N)
      if (xy.first.size() >= 2) table.fits.push_back({name, "L", N.real(), linear_fit(xy.first, xy.second)});
  }
  return table;
}

double zeta_slope_in_N(const SolutionMap& solutions, const std::vector<Dyadic>& N_list, Dyadic L, double delta) {
  require(!L.is_half(), "zeta at L = 1/2 vanishes");
  std::vector<double> x, y;
  for (Dyadic N : N_list) {
    const AnsatzBundle B = build_ansatz(N, solutions, {delta, PsiRoute::Direct, false});
    auto it = B.zeta.find(L);
    require(it != B.zeta.end(), "L exceeds the ladder of N = " + N.label());
    x.push_back(std::log(N.real()));
    y.push_back(std::log(mixed_norm(it->second, 4.0, kInf, it->second.t0, it->second.t_end())));
  }
  return linear_fit(x, y).slope;
}

double constraint_margin(double alpha) {
  const double s0 = 0.5 - alpha / 4.0;
  const double nu0 = std::min(s0, 7.0 * (alpha - 1.0) / 4.0);
  return (alpha - 1.0) + 2.0 * s0 * nu0 - s0;
}

Rational constraint_margin(const Rational& alpha) {
  const Rational s0 = Rational(1, 2) - alpha / 4;
  const Rational branch = Rational(7) * (alpha - 1) / 4;
  const Rational nu0 = s0 < branch ? s0 : branch;
  return (alpha - 1) + 2 * s0 * nu0 - s0;
}

double alpha0() { return (31.0 - std::sqrt(233.0)) / 14.0; }

double alpha0_numeric() {
  std::uintmax_t iterations = 200;
  const auto [lo, hi] = boost::math::tools::toms748_solve(
      [](double a) { return constraint_margin(a); }, 1.05, 1.125, boost::math::tools::eps_tolerance<double>(52),
      iterations);
  return 0.5 * (lo + hi);
}

SigmaPoly SigmaPoly::constant(const Rational& c) { return term(c, Rational(0)); }

SigmaPoly SigmaPoly::term(const Rational& c, const Rational& exponent) {
  SigmaPoly p;
  if (c != 0) p.terms_[exponent] = c;
  return p;
}

SigmaPoly& SigmaPoly::operator+=(const SigmaPoly& o) {
  for (const auto& [e, c] : o.terms_) {
    const Rational v = terms_[e] + c;
    if (v == 0) terms_.erase(e);
    else terms_[e] = v;
  }
  return *this;
}

SigmaPoly& SigmaPoly::operator-=(const SigmaPoly& o) {
  SigmaPoly neg = o;
  neg *= Rational(-1);
  return *this += neg;
}

SigmaPoly& SigmaPoly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

int SigmaPoly::sign() const {
  if (terms_.empty()) return 0;
  return terms_.begin()->second > 0 ? 1 : -1;
}

std::string SigmaPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    os << (first ? "" : " + ") << c;
    if (e != 0) os << "*sigma^" << e;
    first = false;
  }
  return os.str();
}

bool less_than(const SigmaPoly& a, const SigmaPoly& b) { return (b - a).sign() > 0; }

SigmaPoly min(const SigmaPoly& a, const SigmaPoly& b) { return less_than(b, a) ? b : a; }

NumericHierarchy NumericHierarchy::standard(const Rational& alpha) {
  using P = SigmaPoly;
  const P half = P::constant(Rational(1, 2));
  NumericHierarchy h;
  h.alpha = alpha;
  h.b0 = half + P::term(1, 200);
  h.b = half + P::term(2, 200);
  h.b1 = half + P::term(3, 200);
  h.theta = P::term(Rational(1, 100), 200);
  h.q_inv = P::term(1, 50);
  // q' = 1 / (1 - sigma^50), expanded well beyond every exponent compared below.
  for (int m = 0; m <= 8; ++m) h.q_dual += P::term(1, 50 * m);
  h.kappa = P::term(1, -500);
  h.eps1 = P::term(1, 2);
  h.eps2 = h.eps1 + P::term(100, 5);
  h.delta = P::term(1, 20);
  h.delta0 = P::term(1, 10);
  const Rational s0 = Rational(1, 2) - alpha / 4;
  const Rational branch = Rational(7) * (alpha - 1) / 4;
  h.s = P::constant(s0) + P::term(1, 1);
  h.nu = P::constant(s0 < branch ? s0 : branch) - P::term(1, 1);
  return h;
}

bool HierarchyReport::all_hold() const {
  for (const auto& c : checks)
    if (!c.holds) return false;
  return true;
}

HierarchyReport hierarchy_checks(const NumericHierarchy& h) {
  using P = SigmaPoly;
  HierarchyReport r;
  auto strict = [&](const std::string& name, const P& lhs, const P& rhs) {
    const P gap = rhs - lhs;
    r.checks.push_back({name, gap.sign() > 0, gap.str()});
  };
  const P branch = P::constant(Rational(7) * (h.alpha - 1) / 4);
  const P nu_cap = min(h.s, branch) - Rational(100) * (h.eps1 + h.eps2);
  const P gap = nu_cap - h.nu;
  r.checks.push_back({"nu <= min(s, 7(alpha-1)/4) - 100(eps1+eps2)", gap.sign() >= 0, gap.str()});
  strict("eps1 > 100(b1 - 1/2 + 1/q + theta)",
         Rational(100) * (h.b1 - P::constant(Rational(1, 2)) + h.q_inv + h.theta), h.eps1);
  strict("b0 < b", h.b0, h.b);
  strict("b < b1", h.b, h.b1);
  strict("b1 < q'/2", h.b1, Rational(1, 2) * h.q_dual);
  return r;
}

}  // namespace fnls
