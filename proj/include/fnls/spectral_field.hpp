#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fnls/error.hpp"

namespace fnls {

using cplx = std::complex<double>;

/// Dyadic scale 2^e for e >= -1. The value 1/2 is the special low shell that
/// contains only the zero mode.
class Dyadic {
 public:
  static Dyadic half() { return Dyadic(-1); }
  static Dyadic pow2(int exponent);
  /// Throws unless n is a positive power of two.
  static Dyadic of(int n);

  bool is_half() const { return exponent_ < 0; }
  int exponent() const { return exponent_; }
  /// Integer value; throws for the half scale.
  int value() const;
  double real() const;

  Dyadic doubled() const { return Dyadic(exponent_ + 1); }
  /// Throws for the half scale.
  Dyadic halved() const;

  /// Inclusive bounds of the shell, i.e. lo < |k| <= hi, with lo = -1 for 1/2.
  int shell_lo() const;
  int shell_hi() const;
  bool in_shell(int k) const;
  /// All frequencies k with |k| in the shell, ascending.
  std::vector<int> shell_modes() const;

  std::string label() const;

  auto operator<=>(const Dyadic&) const = default;

 private:
  explicit Dyadic(int e) : exponent_(e) {}
  int exponent_;
};

/// Dyadic scales 1/2, 1, 2, ..., up to and including `upper`.
std::vector<Dyadic> dyadic_ladder(Dyadic upper);

/// Largest dyadic L (possibly 1/2) with L < N^(1 - delta).
Dyadic largest_dyadic_below(Dyadic N, double delta);

/// Complex Fourier coefficients u^(k) for |k| <= n_max, with the convention
/// u^(k) = (1/2pi) int_T u(x) e^{-ikx} dx and u = sum_k u^(k) e^{ikx}.
class SpectralField {
 public:
  SpectralField(double alpha, int n_max);
  SpectralField(double alpha, int n_max, std::vector<cplx> coeffs);

  /// amplitude * e_k, embedded at cutoff n_max.
  static SpectralField mode(double alpha, int n_max, int k, cplx amplitude = 1.0);

  double alpha() const { return alpha_; }
  int n_max() const { return n_max_; }
  std::size_t size() const { return coeffs_.size(); }

  /// Coefficient at k; zero outside the cutoff.
  cplx at(int k) const;
  cplx& operator[](int k) { return coeffs_[index(k)]; }
  const cplx& operator[](int k) const { return coeffs_[index(k)]; }

  std::span<cplx> coeffs() { return coeffs_; }
  std::span<const cplx> coeffs() const { return coeffs_; }

  /// Same function viewed at another cutoff (truncating or zero padding).
  SpectralField with_cutoff(int n_max) const;

  bool all_finite() const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(cplx scale);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(SpectralField a, cplx s) { return a *= s; }
  friend SpectralField operator*(cplx s, SpectralField a) { return a *= s; }

 private:
  std::size_t index(int k) const { return static_cast<std::size_t>(k + n_max_); }
  void check_compatible(const SpectralField& other) const;

  double alpha_;
  int n_max_;
  std::vector<cplx> coeffs_;
};

enum class ProjectionMode { Full, Shell, Complement };

/// Pi_N (Full), P_N (Shell) or Pi_N^perp (Complement). The output keeps the
/// input cutoff.
SpectralField project(const SpectralField& u, Dyadic N, ProjectionMode mode);

/// Sharp truncation to |k| <= n for an arbitrary integer n.
SpectralField project_cutoff(const SpectralField& u, int n);

/// |k|^alpha, exact for alpha in {1, 2}.
double abs_pow(long long k, double alpha);

/// (1 + |k|^alpha)^{1/2}, the Gaussian-measure weight.
double weight_bracket(long long k, double alpha);

/// <x> = (1 + x^2)^{1/2}.
double japanese(double x);

/// |k1|^a - |k2|^a + |k3|^a - |k1-k2+k3|^a.
double resonance_phi(long long k1, long long k2, long long k3, double alpha);

/// l^2 inner product sum_k f^(k) conj(g^(k)) over the common modes.
cplx inner(const SpectralField& f, const SpectralField& g);
/// sum_k |u^(k)|^2.
double l2_squared(const SpectralField& u);

}  // namespace fnls
