#include "fnls/fourier_grid.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace fnls {

namespace detail {

struct FftPlans {
  explicit FftPlans(int n) {
    std::vector<cplx> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
    auto* in = reinterpret_cast<fftw_complex*>(a.data());
    auto* out = reinterpret_cast<fftw_complex*>(b.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward = fftw_plan_dft_1d(n, in, out, FFTW_FORWARD, flags);
    backward = fftw_plan_dft_1d(n, in, out, FFTW_BACKWARD, flags);
  }
  ~FftPlans() {
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  fftw_plan forward;
  fftw_plan backward;
};

namespace {

// FFTW planning is not thread safe; execution of an existing plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::shared_ptr<const FftPlans> plans_for(int n) {
  static std::map<int, std::shared_ptr<const FftPlans>> cache;
  std::lock_guard lock(planner_mutex());
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  auto plans = std::make_shared<const FftPlans>(n);
  cache.emplace(n, plans);
  return plans;
}

}  // namespace
}  // namespace detail

FourierGrid::FourierGrid(int size) : size_(size) {
  require(size >= 1, "grid size must be positive");
  plans_ = detail::plans_for(size);
}

int FourierGrid::smooth_size(int min_size) {
  for (int m = std::max(min_size, 1);; ++m) {
    int r = m;
    for (int p : {2, 3, 5})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

FourierGrid FourierGrid::dealiased(int bandwidth, int n_out) {
  return FourierGrid(smooth_size(bandwidth + n_out + 1));
}

std::vector<cplx> FourierGrid::to_physical(const SpectralField& u) const {
  std::vector<cplx> out(static_cast<std::size_t>(size_));
  to_physical(u, out);
  return out;
}

void FourierGrid::to_physical(const SpectralField& u, std::span<cplx> out) const {
  require(2 * u.n_max() < size_, "grid too small for field cutoff");
  require(out.size() == static_cast<std::size_t>(size_), "output span has wrong size");
  std::vector<cplx> in(static_cast<std::size_t>(size_));
  for (int k = -u.n_max(); k <= u.n_max(); ++k) in[static_cast<std::size_t>((k + size_) % size_)] = u[k];
  fftw_execute_dft(plans_->backward, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

SpectralField FourierGrid::to_spectral(std::span<const cplx> values, double alpha,
                                       int n_max) const {
  require(values.size() == static_cast<std::size_t>(size_), "input span has wrong size");
  require(2 * n_max < size_, "grid too small for requested cutoff");
  std::vector<cplx> in(values.begin(), values.end());
  std::vector<cplx> out(static_cast<std::size_t>(size_));
  fftw_execute_dft(plans_->forward, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  SpectralField f(alpha, n_max);
  const double scale = 1.0 / size_;
  for (int k = -n_max; k <= n_max; ++k) f[k] = out[static_cast<std::size_t>((k + size_) % size_)] * scale;
  return f;
}

}  // namespace fnls
