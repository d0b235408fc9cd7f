#include "fnls/picard.hpp"

#include <array>
#include <cmath>

#include "fnls/nonlinear.hpp"
#include "fnls/parallel.hpp"
#include "fnls/random_data.hpp"

namespace fnls {

namespace {
constexpr cplx kI{0.0, 1.0};
}

std::vector<Rational> kappa_sequence(int J) {
  require(J >= 0, "kappa index must be non-negative");
  std::vector<Rational> kap{Rational(1)};
  for (int j = 1; j <= J; ++j) {
    Rational acc(0);
    for (int j1 = 0; j1 <= j - 1; ++j1)
      for (int j2 = 0; j1 + j2 <= j - 1; ++j2) acc += kap[j1] * kap[j2] * kap[j - 1 - j1 - j2];
    kap.push_back(acc / j);
  }
  return kap;
}

Rational kappa(int j) { return kappa_sequence(j).back(); }

GeneratingFunctionCheck generating_function_check(double z, int J) {
  require(z >= 0.0 && z < 0.5, "generating function converges for 0 <= z < 1/2");
  const auto kap = kappa_sequence(J + 1);
  GeneratingFunctionCheck out;
  out.z = z;
  out.J = J;
  double zj = 1.0;
  for (int j = 0; j <= J; ++j, zj *= z) out.partial_sum += static_cast<double>(kap[j]) * zj;
  out.limit = 1.0 / std::sqrt(1.0 - 2.0 * z);
  out.error = std::abs(out.limit - out.partial_sum);
  out.tail_bound = 2.0 * static_cast<double>(kap[J + 1]) * zj;
  return out;
}

std::vector<cplx> cumulative_simpson(const std::vector<cplx>& f, double h) {
  const std::size_t n = f.size();
  std::vector<cplx> out(n, 0.0);
  if (n < 2) return out;
  if (n == 2) {
    out[1] = 0.5 * h * (f[0] + f[1]);
    return out;
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (i % 2 == 0) {
      out[i] = out[i - 2] + h / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i]);
    } else if (i + 1 < n) {
      out[i] = out[i - 1] + h / 12.0 * (5.0 * f[i - 1] + 8.0 * f[i] - f[i + 1]);
    } else {
      out[i] = out[i - 1] + h / 12.0 * (-f[i - 2] + 8.0 * f[i - 1] + 5.0 * f[i]);
    }
  }
  return out;
}

PicardChain::PicardChain(SpectralField phi, double T, double dt)
    : phi_(std::move(phi)), dt_(dt), steps_(step_count(T, dt)) {
  require(steps_ >= 2, "Picard grid needs at least two steps");
}

const Trajectory& PicardChain::iterate(int j) {
  require(j >= 0, "iterate index must be non-negative");
  if (auto it = memo_.find(j); it != memo_.end()) return it->second;

  if (j == 0) {
    Trajectory z = linear_trajectory(phi_, 0.0, dt_, steps_);
    z.variant = Variant::Derived;
    return memo_.emplace(0, std::move(z)).first->second;
  }

  std::vector<std::array<int, 3>> triples;
  for (int j1 = 0; j1 <= j - 1; ++j1)
    for (int j2 = 0; j1 + j2 <= j - 1; ++j2) triples.push_back({j1, j2, j - 1 - j1 - j2});
  for (int l = 0; l < j; ++l) iterate(l);

  const int n_out = (2 * j + 1) * phi_.n_max();
  const double alpha = phi_.alpha();
  const std::size_t count = steps_ + 1;
  std::vector<SpectralField> forcing;
  forcing.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    SpectralField F(alpha, n_out);
    for (const auto& [j1, j2, j3] : triples)
      F += cubic_product(memo_.at(j1)[i], memo_.at(j2)[i], memo_.at(j3)[i], n_out);
    forcing.push_back(std::move(F));
  }

  // Interaction picture: a' = i S(-t) F, z = S(t) a.
  Trajectory z{std::vector<SpectralField>(count, SpectralField(alpha, n_out)), 0.0, dt_, Variant::Derived};
  std::vector<cplx> f(count);
  for (int k = -n_out; k <= n_out; ++k) {
    const double w = abs_pow(k, alpha);
    for (std::size_t i = 0; i < count; ++i) f[i] = kI * std::polar(1.0, -w * dt_ * static_cast<double>(i)) * forcing[i][k];
    const auto a = cumulative_simpson(f, dt_);
    for (std::size_t i = 0; i < count; ++i) z.fields[i][k] = std::polar(1.0, w * dt_ * static_cast<double>(i)) * a[i];
  }
  return memo_.emplace(j, std::move(z)).first->second;
}

Trajectory PicardChain::partial_sum(int J) {
  const int n_out = (2 * J + 1) * phi_.n_max();
  Trajectory Z = with_cutoff(iterate(0), n_out);
  for (int j = 1; j <= J; ++j) {
    const Trajectory& z = iterate(j);
    for (std::size_t i = 0; i < Z.size(); ++i) Z.fields[i] += z[i].with_cutoff(n_out);
  }
  return Z;
}

Trajectory picard_iterate(int j, const SpectralField& phi, double T, double dt) {
  PicardChain chain(phi, T, dt);
  return chain.iterate(j);
}

double equation_residual(const Trajectory& Z, std::size_t i) {
  Z.validate();
  require(i >= 2 && i + 2 < Z.size(), "residual needs two neighbours on each side");
  const int n = Z[0].n_max();
  const int n_out = 3 * n;
  const SpectralField dZ =
      (Z[i - 2] - Z[i + 2] + 8.0 * (Z[i + 1] - Z[i - 1])) * cplx(1.0 / (12.0 * Z.dt));
  SpectralField r = cubic_product(Z[i], Z[i], Z[i], n_out);
  const SpectralField lhs = dZ * kI;
  for (int k = -n; k <= n; ++k) r[k] += lhs[k] + abs_pow(k, Z[i].alpha()) * Z[i][k];
  return std::sqrt(mass(r));
}

std::vector<MomentResult> moment_bound_check(int j, int n, double alpha, const std::vector<double>& times,
                                             std::size_t n_samples, std::uint64_t seed, double dt) {
  require(j >= 0 && j <= 4, "moment check supports 0 <= j <= 4");
  require(!times.empty() && n_samples >= 2, "need times and at least two samples");
  double t_max = 0.0;
  for (double t : times) t_max = std::max(t_max, t);
  const std::size_t steps = std::max<std::size_t>(2, step_count(t_max, dt));
  std::vector<std::size_t> index;
  for (double t : times) index.push_back(step_count(t, dt));

  // values[s][m] = |z_{2j+1}(times[m], 0)|^2 for sample s.
  std::vector<std::vector<double>> values(n_samples);
  parallel_for(n_samples, [&](std::size_t s) {
    PicardChain chain(sample_gaussian(n, alpha, {seed, s}), dt * static_cast<double>(steps), dt);
    const Trajectory& z = chain.iterate(j);
    for (std::size_t i : index) {
      cplx at0 = 0.0;
      for (const auto& c : z[i].coeffs()) at0 += c;
      values[s].push_back(std::norm(at0));
    }
  });

  const double kap = static_cast<double>(kappa(j));
  double factorial = 1.0;
  for (int m = 2; m <= 2 * j + 1; ++m) factorial *= m;
  std::vector<MomentResult> out;
  for (std::size_t m = 0; m < times.size(); ++m) {
    double sum = 0.0;
    double sum2 = 0.0;
    for (const auto& v : values) {
      sum += v[m];
      sum2 += v[m] * v[m];
    }
    const double N = static_cast<double>(n_samples);
    MomentResult r;
    r.j = j;
    r.n = n;
    r.alpha = alpha;
    r.t = times[m];
    r.samples = n_samples;
    r.mean = sum / N;
    r.std_error = std::sqrt(std::max(0.0, sum2 / N - r.mean * r.mean) / (N - 1.0));
    r.bound_value = std::pow(times[m], 2 * j) * factorial * kap * kap;
    r.ratio = r.mean / r.bound_value;
    out.push_back(r);
  }
  return out;
}

}  // namespace fnls
