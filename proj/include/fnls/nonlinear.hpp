#pragma once

#include <optional>

#include "fnls/spectral_field.hpp"

namespace fnls {

/// Full cubic product f1 * conj(f2) * f3, exact on |k| <= n_out. Default
/// n_out is the sum of the input cutoffs.
SpectralField cubic_product(const SpectralField& f1, const SpectralField& f2,
                            const SpectralField& f3, std::optional<int> n_out = {});

/// N3(f1,f2,f3)^(k) = sum over k1-k2+k3 = k, k2 != k1, k2 != k3 of
/// f1^(k1) conj(f2^(k2)) f3^(k3). Evaluated through the dealiased product and
/// the inclusion-exclusion identity
///   N3 = f1 conj(f2) f3 - <f1,f2> f3 - <f3,f2> f1 + N0.
SpectralField trilinear_n3(const SpectralField& f1, const SpectralField& f2,
                           const SpectralField& f3, std::optional<int> n_out = {});

/// N0(f1,f2,f3)^(k) = f1^(k) conj(f2^(k)) f3^(k). Default n_out is the
/// smallest input cutoff.
SpectralField trilinear_n0(const SpectralField& f1, const SpectralField& f2,
                           const SpectralField& f3, std::optional<int> n_out = {});

/// Wick-ordered nonlinearity -N3(v,v,v) + N0(v,v,v) at the cutoff of v.
SpectralField wick_nonlinearity(const SpectralField& v);

/// int_T |u|^4 dx, exact for trigonometric polynomials.
double quartic_integral(const SpectralField& u);

/// M(u) = int_T |u|^2 dx = 2 pi sum |u^(k)|^2.
double mass(const SpectralField& u);

/// H(u) = 2 pi sum |k|^alpha |u^(k)|^2 + (1/2) int_T |u|^4 dx.
double hamiltonian(const SpectralField& u);

/// Truncated Hamiltonian H_n(u) = H(Pi_n u).
double hamiltonian_truncated(const SpectralField& u, int n);

}  // namespace fnls
