#include "fnls/spectral_field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

namespace fnls {

Dyadic Dyadic::pow2(int exponent) {
  require(exponent >= -1, "dyadic exponent must be >= -1");
  require(exponent < 30, "dyadic exponent too large");
  return Dyadic(exponent);
}

Dyadic Dyadic::of(int n) {
  require(n >= 1 && (n & (n - 1)) == 0, "dyadic value must be a positive power of two, got " +
                                            std::to_string(n));
  int e = 0;
  while ((1 << e) < n) ++e;
  return Dyadic(e);
}

int Dyadic::value() const {
  require(!is_half(), "the 1/2 scale has no integer value");
  return 1 << exponent_;
}

double Dyadic::real() const { return std::ldexp(1.0, exponent_); }

Dyadic Dyadic::halved() const {
  require(!is_half(), "cannot halve the 1/2 scale");
  return Dyadic(exponent_ - 1);
}

int Dyadic::shell_lo() const { return is_half() ? -1 : value() / 2; }
int Dyadic::shell_hi() const { return is_half() ? 0 : value(); }

bool Dyadic::in_shell(int k) const {
  const int a = std::abs(k);
  return a > shell_lo() && a <= shell_hi();
}

std::vector<int> Dyadic::shell_modes() const {
  std::vector<int> modes;
  for (int k = -shell_hi(); k <= shell_hi(); ++k)
    if (in_shell(k)) modes.push_back(k);
  return modes;
}

std::string Dyadic::label() const { return is_half() ? "1/2" : std::to_string(value()); }

std::vector<Dyadic> dyadic_ladder(Dyadic upper) {
  std::vector<Dyadic> out;
  for (Dyadic d = Dyadic::half(); d <= upper; d = d.doubled()) out.push_back(d);
  return out;
}

Dyadic largest_dyadic_below(Dyadic N, double delta) {
  require(!N.is_half(), "L_N is defined for N >= 1");
  require(delta >= 0.0 && delta < 1.0, "delta must lie in [0, 1)");
  const double bound = (1.0 - delta) * N.exponent();
  Dyadic best = Dyadic::half();
  for (int e = 0; e < bound; ++e) best = Dyadic::pow2(e);
  return best;
}

SpectralField::SpectralField(double alpha, int n_max)
    : alpha_(alpha), n_max_(n_max), coeffs_(static_cast<std::size_t>(2 * n_max + 1)) {
  require(n_max >= 0, "n_max must be non-negative");
  require(alpha >= 1.0 && alpha <= 2.0, "alpha must lie in [1, 2]");
}

SpectralField::SpectralField(double alpha, int n_max, std::vector<cplx> coeffs)
    : SpectralField(alpha, n_max) {
  require(coeffs.size() == coeffs_.size(), "coefficient array must have 2*n_max+1 entries");
  coeffs_ = std::move(coeffs);
  require(all_finite(), "coefficients must be finite");
}

SpectralField SpectralField::mode(double alpha, int n_max, int k, cplx amplitude) {
  SpectralField f(alpha, n_max);
  require(std::abs(k) <= n_max, "mode outside cutoff");
  f[k] = amplitude;
  return f;
}

cplx SpectralField::at(int k) const {
  return std::abs(k) <= n_max_ ? coeffs_[index(k)] : cplx{};
}

SpectralField SpectralField::with_cutoff(int n_max) const {
  SpectralField out(alpha_, n_max);
  const int m = std::min(n_max, n_max_);
  for (int k = -m; k <= m; ++k) out[k] = (*this)[k];
  return out;
}

bool SpectralField::all_finite() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const cplx& c) {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
  });
}

void SpectralField::check_compatible(const SpectralField& other) const {
  if (other.n_max_ != n_max_) throw GridMismatch("spectral fields have different cutoffs");
  if (other.alpha_ != alpha_) throw InvalidArgument("spectral fields have different alpha");
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  check_compatible(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  check_compatible(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(cplx scale) {
  for (auto& c : coeffs_) c *= scale;
  return *this;
}

SpectralField project(const SpectralField& u, Dyadic N, ProjectionMode mode) {
  SpectralField out(u.alpha(), u.n_max());
  const int hi = N.shell_hi();
  for (int k = -u.n_max(); k <= u.n_max(); ++k) {
    const int a = std::abs(k);
    bool keep = false;
    switch (mode) {
      case ProjectionMode::Full: keep = a <= hi; break;
      case ProjectionMode::Shell: keep = N.in_shell(k); break;
      case ProjectionMode::Complement: keep = a > hi; break;
    }
    if (keep) out[k] = u[k];
  }
  return out;
}

SpectralField project_cutoff(const SpectralField& u, int n) {
  SpectralField out(u.alpha(), u.n_max());
  const int m = std::min(n, u.n_max());
  for (int k = -m; k <= m; ++k) out[k] = u[k];
  return out;
}

double abs_pow(long long k, double alpha) {
  const double a = static_cast<double>(k < 0 ? -k : k);
  if (alpha == 2.0) return a * a;
  if (alpha == 1.0) return a;
  return std::pow(a, alpha);
}

double weight_bracket(long long k, double alpha) { return std::sqrt(1.0 + abs_pow(k, alpha)); }

double japanese(double x) { return std::sqrt(1.0 + x * x); }

double resonance_phi(long long k1, long long k2, long long k3, double alpha) {
  return abs_pow(k1, alpha) - abs_pow(k2, alpha) + abs_pow(k3, alpha) -
         abs_pow(k1 - k2 + k3, alpha);
}

cplx inner(const SpectralField& f, const SpectralField& g) {
  const int m = std::min(f.n_max(), g.n_max());
  cplx acc{};
  for (int k = -m; k <= m; ++k) acc += f[k] * std::conj(g[k]);
  return acc;
}

double l2_squared(const SpectralField& u) {
  return std::accumulate(u.coeffs().begin(), u.coeffs().end(), 0.0,
                         [](double s, const cplx& c) { return s + std::norm(c); });
}

}  // namespace fnls
