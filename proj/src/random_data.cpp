#include "fnls/random_data.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <random>

#include "fnls/nonlinear.hpp"
#include "fnls/parallel.hpp"

namespace fnls {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Key used for the acceptance uniform of a Gibbs proposal; never a mode index.
constexpr std::int64_t kAcceptKey = std::numeric_limits<std::int64_t>::min();

}  // namespace

KeyedEngine::KeyedEngine(std::uint64_t master, std::uint64_t sample, std::uint64_t stream,
                         std::int64_t mode) {
  std::uint64_t h = mix64(master + kGolden);
  h = mix64(h ^ (sample + 0x632be59bd9b4e019ULL));
  h = mix64(h ^ (stream + 0x85157af5ULL));
  h = mix64(h ^ static_cast<std::uint64_t>(mode));
  state_ = h;
}

KeyedEngine::result_type KeyedEngine::operator()() {
  state_ += kGolden;
  return mix64(state_);
}

double KeyedEngine::uniform() {
  // 53 random bits, shifted off zero.
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

cplx KeyedEngine::complex_gaussian() {
  std::normal_distribution<double> normal;
  const double xi = normal(*this);
  const double eta = normal(*this);
  return cplx(xi, eta) * std::sqrt(0.5);
}

SpectralField sample_gaussian(int n, double alpha, const SeedSpec& seed, std::uint64_t stream) {
  require(n >= 0, "cutoff must be non-negative");
  SpectralField u(alpha, n);
  for (int k = -n; k <= n; ++k) {
    KeyedEngine engine(seed.master_seed, seed.sample_index, stream, k);
    u[k] = engine.complex_gaussian() / weight_bracket(k, alpha);
  }
  return u;
}

double gibbs_acceptance_weight(const SpectralField& u) {
  // Average over the torus, not the plain integral: with M = 2 pi sum |u^(k)|^2
  // this is the weight that makes rho_n invariant under the truncated flow.
  return std::exp(-0.5 * quartic_integral(u) / (2.0 * std::numbers::pi));
}

GibbsDraw gibbs_rejection_sample(int n, double alpha, const SeedSpec& seed,
                                 std::uint64_t proposal_cap) {
  for (std::uint64_t p = 1; p <= proposal_cap; ++p) {
    SpectralField proposal = sample_gaussian(n, alpha, seed, p);
    KeyedEngine accept(seed.master_seed, seed.sample_index, p, kAcceptKey);
    if (accept.uniform() < gibbs_acceptance_weight(proposal)) return {std::move(proposal), p};
  }
  throw SamplerCapExceeded("Gibbs rejection sampler exceeded " + std::to_string(proposal_cap) +
                           " proposals at n=" + std::to_string(n) +
                           " (acceptance probability too small)");
}

GibbsEnsemble sample_gibbs_ensemble(int n, double alpha, std::uint64_t master_seed,
                                    std::size_t count, std::uint64_t proposal_cap) {
  require(count >= 1, "ensemble must contain at least one sample");
  std::vector<std::optional<GibbsDraw>> draws(count);
  parallel_for(count, [&](std::size_t i) {
    draws[i] = gibbs_rejection_sample(n, alpha, {master_seed, i}, proposal_cap);
  });
  GibbsEnsemble ens;
  ens.n = n;
  ens.alpha = alpha;
  ens.master_seed = master_seed;
  ens.samples.reserve(count);
  for (auto& d : draws) {
    ens.proposals_used += d->proposals_used;
    ens.samples.push_back(std::move(d->field));
  }
  ens.acceptance_rate = static_cast<double>(count) / static_cast<double>(ens.proposals_used);
  return ens;
}

}  // namespace fnls
