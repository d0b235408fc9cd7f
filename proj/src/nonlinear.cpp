#include "fnls/nonlinear.hpp"

#include <algorithm>
#include <numbers>

#include "fnls/fourier_grid.hpp"

namespace fnls {

namespace {

void check_alpha(const SpectralField& a, const SpectralField& b, const SpectralField& c) {
  require(a.alpha() == b.alpha() && b.alpha() == c.alpha(), "trilinear inputs must share alpha");
}

}  // namespace

SpectralField cubic_product(const SpectralField& f1, const SpectralField& f2,
                            const SpectralField& f3, std::optional<int> n_out) {
  check_alpha(f1, f2, f3);
  const int bandwidth = f1.n_max() + f2.n_max() + f3.n_max();
  const int out_cut = n_out.value_or(bandwidth);
  require(out_cut >= 0, "output cutoff must be non-negative");
  // The grid must also hold every input without wrap-around.
  const auto grid = FourierGrid::dealiased(std::max(bandwidth, 2 * std::max({f1.n_max(), f2.n_max(), f3.n_max()})), out_cut);
  auto p1 = grid.to_physical(f1);
  const auto p2 = grid.to_physical(f2);
  const auto p3 = grid.to_physical(f3);
  for (std::size_t j = 0; j < p1.size(); ++j) p1[j] *= std::conj(p2[j]) * p3[j];
  return grid.to_spectral(p1, f1.alpha(), out_cut);
}

SpectralField trilinear_n0(const SpectralField& f1, const SpectralField& f2,
                           const SpectralField& f3, std::optional<int> n_out) {
  check_alpha(f1, f2, f3);
  const int common = std::min({f1.n_max(), f2.n_max(), f3.n_max()});
  SpectralField out(f1.alpha(), n_out.value_or(common));
  const int m = std::min(common, out.n_max());
  for (int k = -m; k <= m; ++k) out[k] = f1[k] * std::conj(f2[k]) * f3[k];
  return out;
}

SpectralField trilinear_n3(const SpectralField& f1, const SpectralField& f2,
                           const SpectralField& f3, std::optional<int> n_out) {
  const int out_cut = n_out.value_or(f1.n_max() + f2.n_max() + f3.n_max());
  SpectralField out = cubic_product(f1, f2, f3, out_cut);
  const cplx c12 = inner(f1, f2);
  const cplx c32 = inner(f3, f2);
  const int m1 = std::min(f1.n_max(), out_cut);
  const int m3 = std::min(f3.n_max(), out_cut);
  for (int k = -m3; k <= m3; ++k) out[k] -= c12 * f3[k];
  for (int k = -m1; k <= m1; ++k) out[k] -= c32 * f1[k];
  const int m0 = std::min({f1.n_max(), f2.n_max(), f3.n_max(), out_cut});
  for (int k = -m0; k <= m0; ++k) out[k] += f1[k] * std::conj(f2[k]) * f3[k];
  return out;
}

SpectralField wick_nonlinearity(const SpectralField& v) {
  SpectralField out = trilinear_n3(v, v, v, v.n_max());
  out *= -1.0;
  out += trilinear_n0(v, v, v, v.n_max());
  return out;
}

double quartic_integral(const SpectralField& u) {
  // |u|^4 is a trigonometric polynomial of degree 4 n_max; more than 4 n_max
  // equispaced nodes integrate it exactly.
  const FourierGrid grid(FourierGrid::smooth_size(4 * u.n_max() + 2));
  const auto values = grid.to_physical(u);
  double acc = 0.0;
  for (const auto& z : values) {
    const double r2 = std::norm(z);
    acc += r2 * r2;
  }
  return 2.0 * std::numbers::pi * acc / grid.size();
}

double mass(const SpectralField& u) { return 2.0 * std::numbers::pi * l2_squared(u); }

double hamiltonian(const SpectralField& u) {
  double kinetic = 0.0;
  for (int k = -u.n_max(); k <= u.n_max(); ++k) kinetic += abs_pow(k, u.alpha()) * std::norm(u[k]);
  return 2.0 * std::numbers::pi * kinetic + 0.5 * quartic_integral(u);
}

double hamiltonian_truncated(const SpectralField& u, int n) {
  return hamiltonian(project_cutoff(u, n));
}

}  // namespace fnls
