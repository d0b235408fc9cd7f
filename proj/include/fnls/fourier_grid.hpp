#pragma once

#include <memory>
#include <span>
#include <vector>

#include "fnls/spectral_field.hpp"

namespace fnls {

namespace detail {
struct FftPlans;
}

/// Uniform physical grid x_j = 2 pi j / M on the torus with FFTW transforms.
/// Plans are cached per size and shared; a grid object is cheap to copy and
/// safe to use from several threads.
class FourierGrid {
 public:
  explicit FourierGrid(int size);

  /// Smallest 2^a 3^b 5^c that is >= min_size.
  static int smooth_size(int min_size);
  /// Grid on which products reaching frequency `bandwidth` are resolved
  /// without aliasing into |k| <= n_out: size >= bandwidth + n_out + 1.
  static FourierGrid dealiased(int bandwidth, int n_out);

  int size() const { return size_; }

  /// u(x_j) = sum_k u^(k) e^{i k x_j}. Requires 2 n_max < size.
  std::vector<cplx> to_physical(const SpectralField& u) const;
  void to_physical(const SpectralField& u, std::span<cplx> out) const;

  /// Discrete coefficients (1/M) sum_j v_j e^{-i k x_j} for |k| <= n_max.
  SpectralField to_spectral(std::span<const cplx> values, double alpha, int n_max) const;

 private:
  int size_;
  std::shared_ptr<const detail::FftPlans> plans_;
};

}  // namespace fnls
