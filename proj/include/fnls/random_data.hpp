#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "fnls/spectral_field.hpp"

namespace fnls {

/// Identifies one member of a reproducible ensemble.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t sample_index = 0;
};

/// Counter-keyed 64-bit generator (SplitMix64 over a hashed key). Each key
/// (master seed, sample, stream, mode) gives an independent sequence, so
/// draws do not depend on evaluation order or scheduling.
class KeyedEngine {
 public:
  using result_type = std::uint64_t;

  KeyedEngine(std::uint64_t master, std::uint64_t sample, std::uint64_t stream, std::int64_t mode);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  /// Uniform in (0, 1).
  double uniform();
  /// Standard complex Gaussian (xi + i eta)/sqrt(2), E|g|^2 = 1.
  cplx complex_gaussian();

 private:
  std::uint64_t state_;
};

/// phi^omega truncated to |k| <= n: g_k / (1 + |k|^alpha)^{1/2}. The stream
/// index separates independent families drawn from the same SeedSpec.
SpectralField sample_gaussian(int n, double alpha, const SeedSpec& seed, std::uint64_t stream = 0);

struct GibbsDraw {
  SpectralField field;
  std::uint64_t proposals_used;
};

inline constexpr std::uint64_t kDefaultProposalCap = 1'000'000;

/// Exact rejection sampler for the truncated Gibbs measure
/// d rho_n = exp(-(1/2) avg |Pi_n u|^4) d mu, avg = (1/2pi) int_T. Proposals
/// are Gaussian fields on streams 1, 2, ...; the acceptance uniform uses a
/// dedicated key.
GibbsDraw gibbs_rejection_sample(int n, double alpha, const SeedSpec& seed,
                                 std::uint64_t proposal_cap = kDefaultProposalCap);

struct GibbsEnsemble {
  std::vector<SpectralField> samples;
  int n = 0;
  double alpha = 0.0;
  std::uint64_t master_seed = 0;
  std::uint64_t proposals_used = 0;
  double acceptance_rate = 0.0;
};

/// `count` independent Gibbs draws with sample indices 0..count-1.
GibbsEnsemble sample_gibbs_ensemble(int n, double alpha, std::uint64_t master_seed,
                                    std::size_t count,
                                    std::uint64_t proposal_cap = kDefaultProposalCap);

/// Acceptance probability exp(-(1/2) avg |u|^4) = exp(-int |u|^4 / 4pi).
double gibbs_acceptance_weight(const SpectralField& u);

}  // namespace fnls
