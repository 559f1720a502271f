#include "entbound/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace entbound {

namespace {

constexpr double kLn2 = 0.6931471805599453;

double binary_entropy(double p) {
  double s = 0.0;
  if (p > kEigenvalueClip) s -= p * std::log2(p);
  const double q = 1.0 - p;
  if (q > kEigenvalueClip) s -= q * std::log2(q);
  return s;
}

// Entanglement entropy of one ensemble member given as an unnormalized
// column on a d_a x d_b bipartite space, weighted by its norm squared.
// Returns p * S(member); p is written out. Takes a Ref so matrix
// columns bind without copying on the descent hot path.
double weighted_member_entanglement(const Eigen::Ref<const Vector>& col, int d_a, int d_b,
                                    double* p_out) {
  const double p = col.squaredNorm();
  if (p_out) *p_out = p;
  if (p < 1e-15) return 0.0;
  if (d_a == 2 && d_b == 2) {
    // Closed-form spectrum of the 2x2 reduced state.
    const double a = std::norm(col(0)) + std::norm(col(1));
    const double b = std::norm(col(2)) + std::norm(col(3));
    const Complex c = col(0) * std::conj(col(2)) + col(1) * std::conj(col(3));
    const double det = (a * b - std::norm(c)) / (p * p);
    const double disc = std::sqrt(std::max(0.25 - det, 0.0));
    return p * binary_entropy(std::min(0.5 + disc, 1.0));
  }
  Vector unit = col / std::sqrt(p);
  return p * shannon_entropy(schmidt_spectrum(unit, d_a, d_b));
}

double normalization_cap(int d_a, int d_b) {
  return std::log2(static_cast<double>(std::min(d_a, d_b)));
}

MultipartiteState flatten_for_cut(const MultipartiteState& rho, const CutSpec& cut) {
  if (cut.tripartite()) {
    throw std::invalid_argument("measure estimators take a bipartite cut");
  }
  return regroup_bipartite(rho, cut);
}

}  // namespace

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::exact: return "exact";
    case BoundKind::upper: return "upper";
    case BoundKind::lower: return "lower";
  }
  return "unknown";
}

MultipartiteState EnsembleDecomposition::mix() const {
  if (probs.size() != states.size() || probs.empty()) {
    throw std::invalid_argument("ensemble needs matching, nonempty probs and states");
  }
  const long d = states.front().vector.size();
  Matrix m = Matrix::Zero(d, d);
  for (size_t i = 0; i < probs.size(); ++i) {
    m.noalias() += probs[i] * (states[i].vector * states[i].vector.adjoint());
  }
  return MultipartiteState(states.front().dims, std::move(m));
}

void EnsembleDecomposition::validate_against(const MultipartiteState& target) const {
  double total = 0.0;
  for (double p : probs) {
    if (p < -1e-12) throw std::invalid_argument("ensemble probability is negative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-10) {
    throw std::invalid_argument("ensemble probabilities do not sum to one");
  }
  const MultipartiteState mixed = mix();
  if (trace_distance(mixed.matrix, target.matrix) > 1e-8) {
    throw std::invalid_argument("ensemble does not reconstruct the target state");
  }
}

nlohmann::json to_json(const MeasureEstimate& estimate, bool include_witness) {
  nlohmann::json record{{"value", estimate.value},
                        {"kind", to_string(estimate.kind)},
                        {"tol", estimate.tol},
                        {"method", estimate.method},
                        {"heuristic", estimate.heuristic},
                        {"converged", estimate.converged}};
  if (include_witness && estimate.witness) {
    nlohmann::json members = nlohmann::json::array();
    for (size_t i = 0; i < estimate.witness->probs.size(); ++i) {
      const Vector& v = estimate.witness->states[i].vector;
      std::vector<double> re(static_cast<size_t>(v.size()));
      std::vector<double> im(static_cast<size_t>(v.size()));
      for (long k = 0; k < v.size(); ++k) {
        re[static_cast<size_t>(k)] = v(k).real();
        im[static_cast<size_t>(k)] = v(k).imag();
      }
      members.push_back({{"prob", estimate.witness->probs[i]},
                         {"dims", estimate.witness->states[i].dims},
                         {"vec_re", re},
                         {"vec_im", im}});
    }
    record["witness"] = std::move(members);
  }
  return record;
}

double BoundSet::primary() const {
  for (const auto& e : estimates) {
    if (e.kind == BoundKind::exact) return e.value;
  }
  double best_upper = std::numeric_limits<double>::infinity();
  for (const auto& e : estimates) {
    if (e.kind == BoundKind::upper) best_upper = std::min(best_upper, e.value);
  }
  if (std::isfinite(best_upper)) return std::min(best_upper, cap);
  double best_lower = 0.0;
  for (const auto& e : estimates) {
    if (e.kind == BoundKind::lower) best_lower = std::max(best_lower, e.value);
  }
  return best_lower;
}

double BoundSet::certified_lower() const {
  double best = 0.0;
  for (const auto& e : estimates) {
    if (e.heuristic) continue;
    if (e.kind == BoundKind::exact || e.kind == BoundKind::lower) {
      best = std::max(best, e.value - e.tol);
    }
  }
  return std::max(best, 0.0);
}

double BoundSet::certified_upper() const {
  double best = cap;
  for (const auto& e : estimates) {
    if (e.heuristic) continue;
    if (e.kind == BoundKind::exact || e.kind == BoundKind::upper) {
      best = std::min(best, e.value + e.tol);
    }
  }
  return best;
}

bool BoundSet::has_exact() const {
  return std::any_of(estimates.begin(), estimates.end(),
                     [](const MeasureEstimate& e) { return e.kind == BoundKind::exact; });
}

nlohmann::json to_json(const BoundSet& bounds, bool include_witness) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& e : bounds.estimates) list.push_back(to_json(e, include_witness));
  return nlohmann::json{{"estimates", std::move(list)},
                        {"cap", bounds.cap},
                        {"primary", bounds.primary()},
                        {"certified_lower", bounds.certified_lower()},
                        {"certified_upper", bounds.certified_upper()}};
}

MeasureEstimate entropy_of_entanglement(const PureState& psi, const CutSpec& cut) {
  psi.validate();
  const PureState flat = regroup_bipartite(psi, cut);
  MeasureEstimate out;
  out.value = shannon_entropy(schmidt_spectrum(flat.vector, flat.dims[0], flat.dims[1]));
  out.kind = BoundKind::exact;
  out.tol = 1e-9;
  out.method = "entropy-of-entanglement";
  return out;
}

MeasureEstimate entropy_of_entanglement(const MultipartiteState& rho, const CutSpec& cut) {
  return entropy_of_entanglement(dominant_eigenvector(rho), cut);
}

double concurrence_two_qubit(const MultipartiteState& rho) {
  if (rho.dims != std::vector<int>{2, 2}) {
    throw std::invalid_argument("concurrence requires dims [2, 2]");
  }
  Matrix yy(4, 4);
  yy.setZero();
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const Matrix rho_tilde = yy * rho.matrix.conjugate() * yy;

  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix);
  Matrix sqrt_rho = Matrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i) {
    const double lam = std::max(es.eigenvalues()(i), 0.0);
    sqrt_rho.noalias() +=
        std::sqrt(lam) * (es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint());
  }
  // Eigenvalues of rho * rho_tilde equal those of the Hermitian
  // sqrt(rho) rho_tilde sqrt(rho).
  const Matrix m = sqrt_rho * rho_tilde * sqrt_rho;
  Eigen::SelfAdjointEigenSolver<Matrix> ms((m + m.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  std::array<double, 4> lam{};
  for (int i = 0; i < 4; ++i) lam[static_cast<size_t>(i)] = std::sqrt(std::max(ms.eigenvalues()(i), 0.0));
  std::sort(lam.begin(), lam.end(), std::greater<>());
  return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

MeasureEstimate ef_two_qubit(const MultipartiteState& rho) {
  const double c = concurrence_two_qubit(rho);
  MeasureEstimate out;
  out.value = binary_entropy(0.5 * (1.0 + std::sqrt(std::max(1.0 - c * c, 0.0))));
  out.kind = BoundKind::exact;
  out.tol = 1e-9;
  out.method = "wootters-two-qubit";
  return out;
}

namespace {

// Hermitian-parameter descent state for the convex-roof estimator.
// Scratch buffers are reused across the many objective evaluations of
// one estimate; the descent is single threaded per estimate.
struct RoofProblem {
  Matrix scaled_vecs;  // columns sqrt(lambda_i) |e_i>, D x r
  int d_a = 0;
  int d_b = 0;
  int rank = 0;
  int m = 0;

  mutable Eigen::SelfAdjointEigenSolver<Matrix> solver;
  mutable Matrix rotated;  // m x r, exp(i theta)-scaled rows of V^dag
  mutable Matrix u_cols;   // m x r, first r columns of exp(iH)
  mutable Matrix members;  // D x m

  // Average member entanglement of the ensemble generated by the first
  // `rank` columns of exp(iH) = V exp(i theta) V^dag.
  double objective(const Matrix& h) const {
    solver.compute(h);
    rotated.noalias() = solver.eigenvectors().adjoint().leftCols(rank);
    for (int i = 0; i < m; ++i) {
      const double theta = solver.eigenvalues()(i);
      rotated.row(i) *= Complex(std::cos(theta), std::sin(theta));
    }
    u_cols.noalias() = solver.eigenvectors() * rotated;
    members.noalias() = scaled_vecs * u_cols.transpose();
    double total = 0.0;
    for (int j = 0; j < m; ++j) {
      total += weighted_member_entanglement(members.col(j), d_a, d_b, nullptr);
    }
    return total;
  }

  EnsembleDecomposition ensemble(const Matrix& h, const std::vector<int>& dims) const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Matrix phases(m, m);
    phases.setZero();
    for (int i = 0; i < m; ++i) {
      const double theta = es.eigenvalues()(i);
      phases(i, i) = Complex(std::cos(theta), std::sin(theta));
    }
    const Matrix u = es.eigenvectors() * phases * es.eigenvectors().adjoint();
    const Matrix members = scaled_vecs * u.leftCols(rank).transpose();
    EnsembleDecomposition out;
    for (int j = 0; j < m; ++j) {
      const double p = members.col(j).squaredNorm();
      if (p < 1e-12) continue;
      Vector v = members.col(j) / std::sqrt(p);
      out.probs.push_back(p);
      out.states.emplace_back(dims, std::move(v));
    }
    // Absorb rounding into the largest weight so the witness sums to one.
    double total = 0.0;
    for (double p : out.probs) total += p;
    if (!out.probs.empty()) {
      auto it = std::max_element(out.probs.begin(), out.probs.end());
      *it += 1.0 - total;
    }
    return out;
  }
};

// Forward-difference gradient over the real parameters of Hermitian H.
Matrix roof_fd_gradient(const RoofProblem& problem, const Matrix& h, double base) {
  const int m = problem.m;
  const double step = 1e-5;
  Matrix grad = Matrix::Zero(m, m);
  Matrix probe = h;
  for (int i = 0; i < m; ++i) {
    probe(i, i) = h(i, i) + step;
    grad(i, i) = Complex((problem.objective(probe) - base) / step, 0.0);
    probe(i, i) = h(i, i);
  }
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      probe(i, j) = h(i, j) + step;
      probe(j, i) = h(j, i) + step;
      const double d_re = (problem.objective(probe) - base) / step;
      probe(i, j) = h(i, j) + Complex(0.0, step);
      probe(j, i) = h(j, i) - Complex(0.0, step);
      const double d_im = (problem.objective(probe) - base) / step;
      probe(i, j) = h(i, j);
      probe(j, i) = h(j, i);
      grad(i, j) = 0.5 * Complex(d_re, d_im);
      grad(j, i) = std::conj(grad(i, j));
    }
  }
  return grad;
}

}  // namespace

MeasureEstimate ef_convex_roof_upper(const MultipartiteState& rho, const CutSpec& cut,
                                     const RoofOptions& options) {
  const MultipartiteState flat = flatten_for_cut(rho, cut);
  const int d_a = flat.dims[0];
  const int d_b = flat.dims[1];
  const double cap = normalization_cap(d_a, d_b);
  const long d = flat.matrix.rows();

  Eigen::SelfAdjointEigenSolver<Matrix> es(flat.matrix);
  std::vector<int> support;
  for (long i = 0; i < d; ++i) {
    if (es.eigenvalues()(i) > kEigenvalueClip) support.push_back(static_cast<int>(i));
  }
  if (support.empty()) throw std::invalid_argument("state has numerically empty support");

  RoofProblem problem;
  problem.rank = static_cast<int>(support.size());
  problem.d_a = d_a;
  problem.d_b = d_b;
  problem.m = options.ensemble_size == 0 ? problem.rank + 1 : options.ensemble_size;
  if (problem.m < problem.rank) {
    throw std::invalid_argument("ensemble size is below the state rank");
  }
  problem.scaled_vecs.resize(d, problem.rank);
  for (int a = 0; a < problem.rank; ++a) {
    const int i = support[static_cast<size_t>(a)];
    problem.scaled_vecs.col(a) = std::sqrt(es.eigenvalues()(i)) * es.eigenvectors().col(i);
  }
  problem.rotated.resize(problem.m, problem.rank);
  problem.u_cols.resize(problem.m, problem.rank);
  problem.members.resize(d, problem.m);

  SeededSampler sampler(options.seed, 0x726f6f66u);
  const int m = problem.m;
  Matrix best_h = Matrix::Zero(m, m);
  double best_value = problem.objective(best_h);

  for (int restart = 0; restart < std::max(options.restarts, 1); ++restart) {
    Matrix h;
    if (restart == 0) {
      h = Matrix::Zero(m, m);
    } else {
      const Matrix g = sampler.ginibre(m, m);
      const double scale = 0.2 + 1.2 * sampler.uniform();
      h = scale * 0.5 * (g + g.adjoint());
    }
    double value = problem.objective(h);
    double step = 0.5;
    int stalls = 0;
    for (int iter = 0; iter < options.max_iters; ++iter) {
      const Matrix grad = roof_fd_gradient(problem, h, value);
      if (grad.norm() < 1e-8) break;
      bool improved = false;
      while (step >= 1e-7) {
        const Matrix trial = h - step * grad;
        const double trial_value = problem.objective(trial);
        if (trial_value < value - 1e-12) {
          if (value - trial_value < 1e-9) {
            ++stalls;
          } else {
            stalls = 0;
          }
          h = trial;
          value = trial_value;
          step = std::min(step * 1.5, 2.0);
          improved = true;
          break;
        }
        step /= 2.0;
      }
      if (!improved || stalls >= 3) break;
    }
    if (value < best_value) {
      best_value = value;
      best_h = h;
    }
  }

  MeasureEstimate out;
  out.kind = BoundKind::upper;
  out.tol = 1e-8;
  out.method = "convex-roof-descent";
  out.witness = problem.ensemble(best_h, flat.dims);
  out.witness->validate_against(flat);
  out.value = std::clamp(best_value, 0.0, cap);
  return out;
}

MeasureEstimate er_trivial_upper(const MultipartiteState& rho, const CutSpec& cut) {
  const MultipartiteState flat = flatten_for_cut(rho, cut);
  MeasureEstimate out;
  out.value = std::max(
      std::log2(static_cast<double>(flat.dims[0]) * flat.dims[1]) - von_neumann_entropy(flat),
      0.0);
  out.kind = BoundKind::upper;
  out.tol = 1e-9;
  out.method = "relative-entropy-to-maximally-mixed";
  return out;
}

MeasureEstimate er_overlap_lower(const MultipartiteState& rho, const CutSpec& cut,
                                 const ProductOverlapResult& overlap) {
  const MultipartiteState flat = flatten_for_cut(rho, cut);
  const double cap = normalization_cap(flat.dims[0], flat.dims[1]);
  const double entropy = von_neumann_entropy(flat);
  MeasureEstimate out;
  out.kind = BoundKind::lower;
  out.method = "product-overlap-lower-bound";
  out.heuristic = !overlap.certified_global;
  const double overlap_value = std::max(overlap.value, 1e-300);
  out.value = std::clamp(-std::log2(overlap_value) - entropy, 0.0, cap);
  // A larger overlap only weakens the bound, so the certified search
  // tolerance propagates through the logarithm.
  out.tol = overlap.certified_global
                ? overlap.tol / (overlap_value * kLn2) + 1e-9
                : 1e-9;
  return out;
}

namespace {

struct SeparableMixture {
  // Product components (weight, side-A factor, side-B factor) plus a
  // residual weight on the maximally mixed state, which keeps sigma
  // full rank so S(rho || sigma) stays finite.
  struct Component {
    double weight;
    Vector x;
    Vector y;
  };
  double mixed_weight = 1.0;
  std::vector<Component> components;
  int d_a = 0;
  int d_b = 0;

  Matrix build() const {
    const long d = static_cast<long>(d_a) * d_b;
    Matrix sigma = (mixed_weight / static_cast<double>(d)) * Matrix::Identity(d, d);
    Vector xy(d);
    for (const auto& comp : components) {
      for (int a = 0; a < d_a; ++a) xy.segment(a * d_b, d_b) = comp.x(a) * comp.y;
      sigma.noalias() += comp.weight * (xy * xy.adjoint());
    }
    return sigma;
  }

  void scale(double factor) {
    mixed_weight *= factor;
    for (auto& comp : components) comp.weight *= factor;
  }

  double total_weight() const {
    double t = mixed_weight;
    for (const auto& comp : components) t += comp.weight;
    return t;
  }

  void prune_and_cap(int cap) {
    components.erase(std::remove_if(components.begin(), components.end(),
                                    [](const Component& c) { return c.weight < 1e-8; }),
                     components.end());
    if (static_cast<int>(components.size()) > cap) {
      std::sort(components.begin(), components.end(),
                [](const Component& a, const Component& b) { return a.weight > b.weight; });
      components.resize(static_cast<size_t>(cap));
    }
    const double t = total_weight();
    if (t > 0.0) scale(1.0 / t);
  }

  EnsembleDecomposition ensemble() const {
    const long d = static_cast<long>(d_a) * d_b;
    EnsembleDecomposition out;
    // The maximally mixed component expands into computational basis
    // products.
    for (int a = 0; a < d_a; ++a) {
      for (int b = 0; b < d_b; ++b) {
        Vector v = Vector::Zero(d);
        v(static_cast<long>(a) * d_b + b) = Complex(1.0, 0.0);
        out.probs.push_back(mixed_weight / static_cast<double>(d));
        out.states.emplace_back(std::vector<int>{d_a, d_b}, std::move(v));
      }
    }
    for (const auto& comp : components) {
      Vector v(d);
      for (int a = 0; a < d_a; ++a) v.segment(a * d_b, d_b) = comp.x(a) * comp.y;
      out.probs.push_back(comp.weight);
      out.states.emplace_back(std::vector<int>{d_a, d_b}, std::move(v));
    }
    return out;
  }
};

// S(rho || sigma) in bits given S(rho); requires supp(rho) within
// supp(sigma), which the mixed-state component guarantees.
double relative_entropy_bits(const Matrix& rho, double rho_entropy_bits, const Matrix& sigma) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sigma);
  const long d = sigma.rows();
  double cross = 0.0;  // tr[rho log2 sigma]
  for (long k = 0; k < d; ++k) {
    const double s = std::max(es.eigenvalues()(k), 1e-300);
    const double weight = (es.eigenvectors().col(k).adjoint() * rho * es.eigenvectors().col(k))(0).real();
    cross += std::log2(s) * std::max(weight, 0.0);
  }
  return -rho_entropy_bits - cross;
}

}  // namespace

MeasureEstimate er_frank_wolfe_upper(const MultipartiteState& rho, const CutSpec& cut,
                                     const FrankWolfeOptions& options) {
  const MultipartiteState flat = flatten_for_cut(rho, cut);
  const int d_a = flat.dims[0];
  const int d_b = flat.dims[1];
  const long d = flat.matrix.rows();
  const double rho_entropy = von_neumann_entropy(flat);

  SeparableMixture mixture;
  mixture.d_a = d_a;
  mixture.d_b = d_b;
  Matrix sigma = mixture.build();

  SeededSampler sampler(options.seed, 0x66772d6cu);
  OverlapOptions lmo;
  lmo.restarts = options.lmo_restarts;
  lmo.tol = 1e-9;
  lmo.max_iters = 200;

  double value = relative_entropy_bits(flat.matrix, rho_entropy, sigma);
  bool converged = false;
  Vector warm_x, warm_y;
  // A warm-started search can keep returning the same local maximizer
  // while better product vertices exist, which makes every stopping
  // test fire early. On a stall, widen the next search with extra
  // randomized restarts and accept convergence only if the widened
  // search stalls as well.
  bool widen = false;

  for (int iter = 0; iter < options.max_iters; ++iter) {
    if (value < 1e-10) {
      converged = true;
      break;
    }
    // Gradient of S(rho || sigma) in sigma's eigenbasis via first
    // divided differences of the natural logarithm: the negative
    // gradient is V (rho_tilde o Phi) V^dag / ln 2, a PSD matrix, so
    // the linear-minimization step is a product-overlap maximization.
    Eigen::SelfAdjointEigenSolver<Matrix> es(sigma);
    const Matrix rho_tilde = es.eigenvectors().adjoint() * flat.matrix * es.eigenvectors();
    Matrix core(d, d);
    for (long k = 0; k < d; ++k) {
      const double sk = std::max(es.eigenvalues()(k), 1e-300);
      for (long l = 0; l < d; ++l) {
        const double sl = std::max(es.eigenvalues()(l), 1e-300);
        const double phi =
            (std::abs(sk - sl) > 1e-14 * std::max(sk, sl)) ? (std::log(sk) - std::log(sl)) / (sk - sl)
                                                           : 1.0 / std::max(sk, sl);
        core(k, l) = rho_tilde(k, l) * phi;
      }
    }
    const Matrix descent = es.eigenvectors() * core * es.eigenvectors().adjoint();

    const bool widened = widen;
    widen = false;
    OverlapOptions lmo_now = lmo;
    if (widened) {
      lmo_now.restarts = 8 * std::max(options.lmo_restarts, 1);
    }
    const bool have_warm = warm_x.size() > 0;
    const ProductOverlapResult vertex = max_product_overlap_matrix(
        descent, d_a, d_b, lmo_now, sampler, have_warm ? &warm_x : nullptr,
        have_warm ? &warm_y : nullptr);
    warm_x = vertex.x.vector;
    warm_y = vertex.y.vector;

    // tr[G sigma] = tr[rho] = 1 for this gradient, so the Frank-Wolfe
    // gap reduces to (overlap - 1) / ln 2.
    const double gap = (vertex.value - 1.0) / kLn2;
    if (gap <= 1e-9) {
      if (!widened) {
        widen = true;
        continue;
      }
      converged = true;
      break;
    }

    Vector xy(d);
    for (int a = 0; a < d_a; ++a) xy.segment(a * d_b, d_b) = vertex.x.vector(a) * vertex.y.vector;
    const Matrix omega = xy * xy.adjoint();

    // Exact line search on the convex segment toward the vertex.
    const double t_max = 0.999999;
    auto eval = [&](double t) {
      return relative_entropy_bits(flat.matrix, rho_entropy, (1.0 - t) * sigma + t * omega);
    };
    const double inv_phi = 0.6180339887498949;
    double lo = 0.0, hi = t_max;
    double t1 = hi - inv_phi * (hi - lo);
    double t2 = lo + inv_phi * (hi - lo);
    double f1 = eval(t1), f2 = eval(t2);
    for (int ls = 0; ls < 28; ++ls) {
      if (f1 <= f2) {
        hi = t2;
        t2 = t1;
        f2 = f1;
        t1 = hi - inv_phi * (hi - lo);
        f1 = eval(t1);
      } else {
        lo = t1;
        t1 = t2;
        f1 = f2;
        t2 = lo + inv_phi * (hi - lo);
        f2 = eval(t2);
      }
    }
    const double t_best = (f1 <= f2) ? t1 : t2;
    const double f_best = std::min(f1, f2);
    if (f_best >= value - 1e-14) {
      // The vertex cannot improve the objective at line-search
      // resolution.
      if (!widened) {
        widen = true;
        continue;
      }
      converged = true;
      break;
    }
    if (f_best > value + 1e-12) {
      throw std::runtime_error("separability descent lost monotonicity");
    }

    mixture.scale(1.0 - t_best);
    mixture.components.push_back({t_best, vertex.x.vector, vertex.y.vector});
    const size_t before = mixture.components.size();
    mixture.prune_and_cap(options.mixture_cap);
    if (mixture.components.size() != before) {
      sigma = mixture.build();
    } else {
      sigma = ((1.0 - t_best) * sigma + t_best * omega).eval();
    }
    const double new_value = relative_entropy_bits(flat.matrix, rho_entropy, sigma);
    const double rel_improvement = (value - new_value) / std::max(value, 1e-12);
    value = new_value;
    if (rel_improvement >= 0.0 && rel_improvement < options.rel_tol) {
      if (!widened) {
        widen = true;
        continue;
      }
      converged = true;
      break;
    }
  }

  // Rebuild sigma from the witness mixture so the reported value and
  // the witness agree exactly.
  sigma = mixture.build();
  MeasureEstimate out;
  out.value = std::max(relative_entropy_bits(flat.matrix, rho_entropy, sigma), 0.0);
  out.kind = BoundKind::upper;
  out.tol = 1e-8;
  out.method = "frank-wolfe-separable";
  out.converged = converged;
  out.witness = mixture.ensemble();
  return out;
}

std::string to_string(EstimatorId id) {
  switch (id) {
    case EstimatorId::ee: return "ee";
    case EstimatorId::ef2: return "ef2";
    case EstimatorId::ef_roof: return "ef-roof";
    case EstimatorId::er_fw: return "er-fw";
    case EstimatorId::er_bounds: return "er-bounds";
    case EstimatorId::ef: return "ef";
    case EstimatorId::er: return "er";
    case EstimatorId::tangle: return "tangle";
  }
  return "unknown";
}

EstimatorId estimator_from_string(const std::string& name) {
  if (name == "ee") return EstimatorId::ee;
  if (name == "ef2") return EstimatorId::ef2;
  if (name == "ef-roof") return EstimatorId::ef_roof;
  if (name == "er-fw") return EstimatorId::er_fw;
  if (name == "er-bounds") return EstimatorId::er_bounds;
  if (name == "ef") return EstimatorId::ef;
  if (name == "er") return EstimatorId::er;
  if (name == "tangle") return EstimatorId::tangle;
  throw std::invalid_argument("unknown estimator: " + name);
}

namespace {

ProductOverlapResult overlap_for(const MultipartiteState& flat, const EstimatorOptions& options) {
  OverlapOptions opts;
  opts.restarts = options.overlap_restarts;
  opts.seed = options.seed;
  opts.brute_force_small = options.certify_small_overlaps && flat.matrix.rows() <= 16;
  SeededSampler sampler(options.seed, 0x65737473u);
  return max_product_overlap_matrix(flat.matrix, flat.dims[0], flat.dims[1], opts, sampler);
}

MeasureEstimate tangle_estimate(const MultipartiteState& flat) {
  const int d_a = flat.dims[0];
  if (flat.purity() >= 1.0 - kPurityTol) {
    if (d_a != 2) {
      throw std::invalid_argument("pure-cut tangle requires a qubit on side A");
    }
    const PureState psi = dominant_eigenvector(flat);
    const RealVector spectrum = schmidt_spectrum(psi.vector, flat.dims[0], flat.dims[1]);
    // 4 det(rho_A) for a qubit marginal: four times the product of the
    // two Schmidt eigenvalues.
    const long n = spectrum.size();
    MeasureEstimate out;
    out.value = 4.0 * std::max(spectrum(n - 1), 0.0) * std::max(spectrum(n - 2), 0.0);
    out.kind = BoundKind::exact;
    out.tol = 1e-9;
    out.method = "pure-cut-tangle";
    return out;
  }
  if (flat.dims == std::vector<int>{2, 2}) {
    const double c = concurrence_two_qubit(flat);
    MeasureEstimate out;
    out.value = c * c;
    out.kind = BoundKind::exact;
    out.tol = 1e-8;
    out.method = "squared-concurrence";
    return out;
  }
  throw std::invalid_argument("tangle requires a pure cut with a qubit side or a two-qubit state");
}

}  // namespace

BoundSet estimate_measure(const MultipartiteState& rho, const CutSpec& cut, EstimatorId id,
                          const EstimatorOptions& options) {
  const MultipartiteState flat = flatten_for_cut(rho, cut);
  const int d_a = flat.dims[0];
  const int d_b = flat.dims[1];
  BoundSet out;
  out.cap = (id == EstimatorId::tangle) ? 1.0 : normalization_cap(d_a, d_b);
  const bool pure = flat.purity() >= 1.0 - kPurityTol;
  const CutSpec flat_cut = CutSpec::parse("0|1", 2);

  switch (id) {
    case EstimatorId::ee: {
      out.estimates.push_back(entropy_of_entanglement(flat, flat_cut));
      break;
    }
    case EstimatorId::ef2: {
      out.estimates.push_back(ef_two_qubit(flat));
      break;
    }
    case EstimatorId::tangle: {
      out.estimates.push_back(tangle_estimate(flat));
      break;
    }
    case EstimatorId::ef_roof: {
      out.estimates.push_back(ef_convex_roof_upper(flat, flat_cut, options.roof));
      break;
    }
    case EstimatorId::er_fw: {
      out.estimates.push_back(er_frank_wolfe_upper(flat, flat_cut, options.fw));
      break;
    }
    case EstimatorId::er_bounds: {
      const ProductOverlapResult overlap = overlap_for(flat, options);
      out.estimates.push_back(er_trivial_upper(flat, flat_cut));
      out.estimates.push_back(er_overlap_lower(flat, flat_cut, overlap));
      break;
    }
    case EstimatorId::ef: {
      if (pure) {
        MeasureEstimate e = entropy_of_entanglement(flat, flat_cut);
        e.method = "entropy-of-entanglement (pure-state entanglement of formation)";
        out.estimates.push_back(std::move(e));
      } else if (flat.dims == std::vector<int>{2, 2}) {
        out.estimates.push_back(ef_two_qubit(flat));
      } else {
        out.estimates.push_back(ef_convex_roof_upper(flat, flat_cut, options.roof));
        // The relative entropy of entanglement never exceeds the
        // entanglement of formation, so its lower bound transfers.
        const ProductOverlapResult overlap = overlap_for(flat, options);
        MeasureEstimate low = er_overlap_lower(flat, flat_cut, overlap);
        low.method = "relative-entropy-lower-bound (transfers to formation)";
        out.estimates.push_back(std::move(low));
      }
      break;
    }
    case EstimatorId::er: {
      if (pure) {
        MeasureEstimate e = entropy_of_entanglement(flat, flat_cut);
        e.method = "entropy-of-entanglement (pure-state relative entropy of entanglement)";
        out.estimates.push_back(std::move(e));
      } else {
        out.estimates.push_back(er_trivial_upper(flat, flat_cut));
        out.estimates.push_back(er_frank_wolfe_upper(flat, flat_cut, options.fw));
        const ProductOverlapResult overlap = overlap_for(flat, options);
        out.estimates.push_back(er_overlap_lower(flat, flat_cut, overlap));
      }
      break;
    }
  }
  return out;
}

}  // namespace entbound
