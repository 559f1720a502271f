#include "entbound/antisym.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace entbound {

namespace {

// Parity of a sequence of distinct values: +1 for an even number of
// inversions relative to sorted order, -1 otherwise.
int permutation_sign(const std::vector<int>& seq) {
  int inversions = 0;
  for (size_t i = 0; i < seq.size(); ++i) {
    for (size_t j = i + 1; j < seq.size(); ++j) {
      if (seq[i] > seq[j]) ++inversions;
    }
  }
  return (inversions % 2 == 0) ? 1 : -1;
}

// Antisymmetrized basis vector for a sorted index subset: the sum of
// signed permutations of |s_1 ... s_n>, normalized by sqrt(n!).
Vector antisym_basis_vector(const std::vector<int>& subset, int d, long total_dim) {
  const int n = static_cast<int>(subset.size());
  std::vector<int> perm = subset;
  double factorial = 1.0;
  for (int i = 2; i <= n; ++i) factorial *= i;
  const double norm = 1.0 / std::sqrt(factorial);

  Vector u = Vector::Zero(total_dim);
  std::sort(perm.begin(), perm.end());
  do {
    long index = 0;
    for (int j = 0; j < n; ++j) index = index * d + perm[static_cast<size_t>(j)];
    u(index) = Complex(permutation_sign(perm) * norm, 0.0);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return u;
}

void for_each_subset(int d, int n, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> subset(static_cast<size_t>(n));
  std::iota(subset.begin(), subset.end(), 0);
  while (true) {
    fn(subset);
    int i = n - 1;
    while (i >= 0 && subset[static_cast<size_t>(i)] == d - n + i) --i;
    if (i < 0) break;
    ++subset[static_cast<size_t>(i)];
    for (int j = i + 1; j < n; ++j) {
      subset[static_cast<size_t>(j)] = subset[static_cast<size_t>(j - 1)] + 1;
    }
  }
}

}  // namespace

void AntisymSpec::validate() const {
  if (d < 1 || n < 1) throw std::invalid_argument("antisymmetric spec needs d, n >= 1");
  if (n > d) {
    throw std::invalid_argument(
        "antisymmetric subspace is empty for more parties than the local dimension");
  }
  double total = 1.0;
  for (int i = 0; i < n; ++i) total *= d;
  if (total > static_cast<double>(dimension_cap())) {
    throw std::invalid_argument("antisymmetric state exceeds the dimension cap");
  }
}

long binomial(int d, int n) {
  if (n < 0 || n > d) return 0;
  long result = 1;
  for (int i = 1; i <= n; ++i) {
    result = result * (d - n + i) / i;
  }
  return result;
}

MultipartiteState antisymmetric_state(const AntisymSpec& spec) {
  spec.validate();
  long total_dim = 1;
  for (int i = 0; i < spec.n; ++i) total_dim *= spec.d;
  const long count = binomial(spec.d, spec.n);

  Matrix projector = Matrix::Zero(total_dim, total_dim);
  for_each_subset(spec.d, spec.n, [&](const std::vector<int>& subset) {
    const Vector u = antisym_basis_vector(subset, spec.d, total_dim);
    projector.noalias() += u * u.adjoint();
  });
  projector /= static_cast<double>(count);

  MultipartiteState alpha(std::vector<int>(static_cast<size_t>(spec.n), spec.d),
                          std::move(projector),
                          "alpha(d=" + std::to_string(spec.d) + ",n=" + std::to_string(spec.n) +
                              ")");
  return alpha;
}

double antisym_pair_overlap(int d) {
  if (d < 2) throw std::invalid_argument("pair overlap needs d >= 2");
  return 1.0 / (static_cast<double>(d) * (d - 1));
}

double verify_marginal_property(const AntisymSpec& spec, int k) {
  spec.validate();
  if (k < 1 || k > spec.n) throw std::invalid_argument("marginal size must satisfy 1 <= k <= n");
  const MultipartiteState alpha_n = antisymmetric_state(spec);
  const MultipartiteState alpha_k = antisymmetric_state({spec.d, k});

  double worst = 0.0;
  for_each_subset(spec.n, k, [&](const std::vector<int>& keep) {
    const MultipartiteState marginal = partial_trace(alpha_n, keep);
    worst = std::max(worst, trace_distance(marginal, alpha_k));
  });
  return worst;
}

namespace {

BoundSet chain_bounds(const MultipartiteState& alpha, const CutSpec& cut, int d, int parties,
                      EstimatorId estimator, const EstimatorOptions& options) {
  BoundSet bounds;
  bounds.cap = std::log2(static_cast<double>(d));

  if (alpha.purity() >= 1.0 - kPurityTol) {
    MeasureEstimate exact = entropy_of_entanglement(alpha, cut);
    exact.method += " (pure antisymmetric instance)";
    bounds.estimates.push_back(std::move(exact));
    return bounds;
  }

  // Certified lower bound. For two parties the maximal product overlap
  // is known in closed form; otherwise the alternating search provides
  // a heuristic overlap (certified only at brute-force dimensions).
  ProductOverlapResult overlap;
  if (parties == 2) {
    overlap.value = antisym_pair_overlap(d);
    overlap.certified_global = true;
    overlap.converged = true;
    overlap.tol = 0.0;
  } else {
    OverlapOptions oo;
    oo.restarts = options.overlap_restarts;
    oo.seed = options.seed;
    oo.brute_force_small = options.certify_small_overlaps && alpha.dim() <= 16;
    SeededSampler sampler(options.seed, 0x63686169u);
    const MultipartiteState flat = regroup_bipartite(alpha, cut);
    overlap = max_product_overlap_matrix(flat.matrix, flat.dims[0], flat.dims[1], oo, sampler);
  }
  MeasureEstimate lower = er_overlap_lower(alpha, cut, overlap);
  if (parties == 2) {
    lower.method = "closed-form-pair-overlap-lower-bound";
    lower.tol = 1e-12;
  }

  const bool want_er = (estimator == EstimatorId::er_fw || estimator == EstimatorId::er ||
                        estimator == EstimatorId::er_bounds);
  if (want_er) {
    bounds.estimates.push_back(er_trivial_upper(alpha, cut));
    bounds.estimates.push_back(er_frank_wolfe_upper(alpha, cut, options.fw));
    bounds.estimates.push_back(std::move(lower));
  } else {
    // Formation-flavored sandwich; the relative-entropy lower bound
    // transfers because E_R never exceeds E_F.
    bounds.estimates.push_back(ef_convex_roof_upper(alpha, cut, options.roof));
    lower.method += " (transfers to formation)";
    bounds.estimates.push_back(std::move(lower));
  }
  return bounds;
}

double ratio_between(const ChainRecord& a, const ChainRecord& b, bool* conservative) {
  if (a.bounds.has_exact() && b.bounds.has_exact()) {
    *conservative = false;
    return a.bounds.primary() / std::max(b.bounds.primary(), 1e-300);
  }
  *conservative = true;
  return a.bounds.certified_lower() / std::max(b.bounds.certified_upper(), 1e-300);
}

}  // namespace

std::vector<ChainRecord> chain_sequence(int d, int max_k, EstimatorId estimator,
                                        const EstimatorOptions& options) {
  if (d < 2) throw std::invalid_argument("chain needs local dimension d >= 2");
  if (max_k < 0) throw std::invalid_argument("chain needs max_k >= 0");

  std::vector<ChainRecord> records;
  for (int k = 0; k <= max_k; ++k) {
    const int parties = (1 << k) + 1;
    if (parties > d) break;  // antisymmetric subspace would be empty
    double total = 1.0;
    for (int i = 0; i < parties; ++i) total *= d;
    if (total > static_cast<double>(dimension_cap())) break;

    const MultipartiteState alpha = antisymmetric_state({d, parties});
    ChainRecord record;
    record.k = k;
    record.parties = parties;
    record.d = d;
    record.cut.side_a = {0};
    record.cut.side_b.resize(static_cast<size_t>(parties - 1));
    std::iota(record.cut.side_b.begin(), record.cut.side_b.end(), 1);
    record.bounds = chain_bounds(alpha, record.cut, d, parties, estimator, options);
    records.push_back(std::move(record));
  }
  if (records.empty()) {
    throw std::invalid_argument("no feasible chain step under the dimension cap");
  }
  for (size_t i = 0; i + 1 < records.size(); ++i) {
    bool conservative = false;
    records[i].ratio = ratio_between(records[i], records[i + 1], &conservative);
    records[i].ratio_conservative = conservative;
  }
  return records;
}

double pigeonhole_threshold(int n, double c, double t) {
  if (n < 1) throw std::invalid_argument("threshold needs n >= 1");
  if (c <= 0.0) throw std::invalid_argument("threshold needs c > 0");
  return 1.0 - std::log(std::pow(static_cast<double>(n), t + 1.0) / c) / n;
}

std::optional<int> pigeonhole_index(const std::vector<ChainRecord>& records, double c, double t) {
  if (records.size() < 2) {
    throw std::invalid_argument("pigeonhole needs at least two chain records");
  }
  const int n = static_cast<int>(records.size()) - 1;
  const double threshold = pigeonhole_threshold(n, c, t);
  for (int k = 0; k < n; ++k) {
    bool conservative = false;
    const double ratio =
        ratio_between(records[static_cast<size_t>(k)], records[static_cast<size_t>(k) + 1],
                      &conservative);
    if (ratio >= threshold - 1e-12) return k;
  }
  return std::nullopt;
}

nlohmann::json to_json(const ChainRecord& record) {
  nlohmann::json out{{"k", record.k},
                     {"parties", record.parties},
                     {"d", record.d},
                     {"cut", record.cut.str()},
                     {"bounds", to_json(record.bounds)}};
  if (record.ratio) {
    out["ratio_to_next"] = *record.ratio;
    out["ratio_conservative"] = record.ratio_conservative;
  }
  return out;
}

nlohmann::json chain_to_json(const std::vector<ChainRecord>& records) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& r : records) list.push_back(to_json(r));
  return nlohmann::json{
      {"records", std::move(list)},
      {"note",
       "desk-scale chain: small d and shallow k replace the asymptotic regime d = 2^n + 1"}};
}

}  // namespace entbound
