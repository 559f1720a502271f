// Maximization of <x (x) y| rho |x (x) y> over product pure states by
// alternating eigenvector ascent with random restarts.
#pragma once

#include "entbound/qstate.hpp"
#include "entbound/random.hpp"

#include <cstdint>

namespace entbound {

struct ProductOverlapResult {
  double value = 0.0;   // best overlap found; a lower bound on the max
  PureState x;          // side-A factor of the best product state
  PureState y;          // side-B factor
  int restarts_used = 0;
  int iterations = 0;   // iterations of the best restart
  bool converged = false;
  // Set only by the exhaustive small-dimension search; when true the
  // value is treated as the global maximum within `tol` downstream.
  bool certified_global = false;
  double tol = 0.0;
};

struct OverlapOptions {
  int restarts = 64;
  double tol = 1e-10;
  int max_iters = 500;
  std::uint64_t seed = 5;
  // Exhaustive mode for d_A * d_B <= 16: dense restarts plus grid
  // seeding and a high-precision polish; marks the result certified.
  bool brute_force_small = false;
};

/// Alternating ascent on a state with a bipartite cut. Each step fixes
/// one factor and replaces the other with the top eigenvector of the
/// contracted operator, so the objective never decreases.
ProductOverlapResult max_product_overlap(const MultipartiteState& rho, const CutSpec& cut,
                                         const OverlapOptions& options = {});

/// Core routine on a raw PSD matrix of shape (d_a*d_b) x (d_a*d_b).
/// Used directly by the separability solver, whose gradient matrices
/// are PSD but not unit trace. Optional warm-start factors are used as
/// the first restart.
ProductOverlapResult max_product_overlap_matrix(const Matrix& m, int d_a, int d_b,
                                                const OverlapOptions& options,
                                                SeededSampler& sampler,
                                                const Vector* warm_x = nullptr,
                                                const Vector* warm_y = nullptr);

}  // namespace entbound
