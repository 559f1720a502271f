#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "entbound/measures.hpp"
#include "entbound/qstate.hpp"

namespace entbound {

// Specification of the antisymmetric state on n parties of local
// dimension d: the normalized projector onto the totally antisymmetric
// subspace of (C^d)^(x n).
struct AntisymSpec {
  int d = 2;
  int n = 2;

  void validate() const;
};

long binomial(int d, int n);

MultipartiteState antisymmetric_state(const AntisymSpec& spec);

// Exact maximal product overlap of the two-party antisymmetric state:
// M(alpha(d,2)) = 1 / (d (d - 1)), attained at any orthogonal pair.
double antisym_pair_overlap(int d);

// Maximum trace distance between the k-party marginal of alpha(d,n)
// and alpha(d,k), over all size-k subsets of the parties.
double verify_marginal_property(const AntisymSpec& spec, int k);

struct ChainRecord {
  int k = 0;
  int parties = 0;  // 2^k + 1
  int d = 0;
  CutSpec cut;
  BoundSet bounds;
  // Ratio g_k / g_{k+1} toward the next record; conservative ratios
  // divide this record's certified lower by the next one's certified
  // upper.
  std::optional<double> ratio;
  bool ratio_conservative = false;
};

// Evaluates g_k = E_{A0 : A1..A_{2^k}} on the antisymmetric state over
// 2^k + 1 parties, for k = 0..max_k, stopping at the largest feasible
// k (the antisymmetric subspace must be nonempty and the total
// dimension must respect the cap). Pure instances use the exact
// entanglement entropy; mixed instances use a certified sandwich built
// from the requested estimator plus the analytic pair overlap at k=0.
std::vector<ChainRecord> chain_sequence(int d, int max_k, EstimatorId estimator,
                                        const EstimatorOptions& options = {});

// Smallest index k with g_k / g_{k+1} >= 1 - ln(n^(t+1)/c)/n, where
// n = records.size() - 1 and the threshold keeps the natural log.
// Returns nullopt when no index qualifies (inconclusive).
std::optional<int> pigeonhole_index(const std::vector<ChainRecord>& records, double c, double t);

double pigeonhole_threshold(int n, double c, double t);

nlohmann::json to_json(const ChainRecord& record);
nlohmann::json chain_to_json(const std::vector<ChainRecord>& records);

}  // namespace entbound
