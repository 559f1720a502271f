// Seeded sampling of Haar-random pure states, induced mixed states,
// random subspaces, and Haar unitaries.
#pragma once

#include "entbound/qstate.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace entbound {

/// Deterministic sampler: identical (seed, stream) pairs reproduce
/// identical sample sequences. Gaussians come from a hand-rolled
/// Box-Muller transform over mt19937_64 so the stream depends only on
/// the engine, not on platform distribution internals.
class SeededSampler {
 public:
  explicit SeededSampler(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  /// Independent sampler for a trial index, derived as seed XOR
  /// hash(trial) on the stream id.
  SeededSampler for_trial(std::uint64_t trial) const;

  /// Uniform double in [0, 1).
  double uniform();

  /// Standard normal.
  double gaussian();

  /// Complex number with independent standard-normal parts.
  Complex complex_gaussian();

  /// Matrix of independent complex_gaussian entries.
  Matrix ginibre(int rows, int cols);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Haar-random unit vector on C^dim (dims = [dim]).
PureState haar_pure(int dim, SeededSampler& sampler);

/// Marginal on C^n of a Haar pure state on C^n x C^s, computed as
/// G G^dag / tr with G an n x s Ginibre matrix. dims = [n].
MultipartiteState induced_state(int n, int s, SeededSampler& sampler);

/// Induced state reshaped as a bipartite system, dims = [d, d].
MultipartiteState induced_bipartite(int d, int s, SeededSampler& sampler);

/// Orthonormal basis of a Haar-random dim-dimensional subspace of
/// C^ambient, via QR of a Ginibre block.
std::vector<PureState> random_subspace(int ambient, int dim, SeededSampler& sampler);

/// Induced state on three d-dimensional parties, dims = [d, d, d],
/// rank <= s. Its two-party marginals are themselves induced states
/// with environment dimension s * d.
MultipartiteState random_tripartite_induced(int d, int s, SeededSampler& sampler);

/// Haar-distributed unitary (QR of Ginibre with phase-fixed R diagonal).
Matrix random_unitary(int dim, SeededSampler& sampler);

}  // namespace entbound
