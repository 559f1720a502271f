#include "entbound/qstate.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace entbound {

namespace {

std::atomic<int> g_dimension_cap{4096};

long product_of(const std::vector<int>& dims) {
  long p = 1;
  for (int d : dims) p *= d;
  return p;
}

void check_dims_positive(const std::vector<int>& dims) {
  if (dims.empty()) throw std::invalid_argument("state needs at least one subsystem");
  for (int d : dims) {
    if (d < 1) throw std::invalid_argument("subsystem dimensions must be positive");
  }
}

// Row strides of each subsystem index in the flattened basis ordering
// (last subsystem varies fastest).
std::vector<long> subsystem_strides(const std::vector<int>& dims) {
  const int n = static_cast<int>(dims.size());
  std::vector<long> stride(n);
  long acc = 1;
  for (int q = n - 1; q >= 0; --q) {
    stride[q] = acc;
    acc *= dims[q];
  }
  return stride;
}

// Flattened offsets of every multi-index over the subsystems listed in
// `subs`, using the strides of the full system.
std::vector<long> enumerate_offsets(const std::vector<int>& subs,
                                    const std::vector<int>& dims,
                                    const std::vector<long>& stride) {
  long count = 1;
  for (int q : subs) count *= dims[q];
  std::vector<long> offsets(static_cast<size_t>(count), 0);
  long repeat = count;
  for (int q : subs) {
    const int dq = dims[q];
    repeat /= dq;
    long idx = 0;
    for (long block = 0; block < count / (repeat * dq); ++block) {
      for (int v = 0; v < dq; ++v) {
        for (long r = 0; r < repeat; ++r) {
          offsets[static_cast<size_t>(idx++)] += v * stride[q];
        }
      }
    }
  }
  return offsets;
}

std::vector<int> parse_index_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw std::invalid_argument("empty index in cut spec");
    size_t pos = 0;
    const int v = std::stoi(item, &pos);
    if (pos != item.size()) throw std::invalid_argument("bad index in cut spec: " + item);
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty side in cut spec");
  return out;
}

}  // namespace

int dimension_cap() { return g_dimension_cap.load(); }

void set_dimension_cap(int cap) {
  if (cap < 1) throw std::invalid_argument("dimension cap must be positive");
  g_dimension_cap.store(cap);
}

MultipartiteState::MultipartiteState(std::vector<int> dims_, Matrix matrix_, std::string label_)
    : dims(std::move(dims_)), matrix(std::move(matrix_)), label(std::move(label_)) {}

int MultipartiteState::dim() const { return static_cast<int>(product_of(dims)); }

double MultipartiteState::purity() const { return (matrix * matrix).trace().real(); }

void MultipartiteState::validate() const {
  check_dims_positive(dims);
  const long d = product_of(dims);
  if (matrix.rows() != d || matrix.cols() != d) {
    throw std::invalid_argument("matrix side does not match product of dims");
  }
  const double herm = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermitianTol) {
    throw std::invalid_argument("state is not Hermitian within tolerance");
  }
  const double tr_err = std::abs(matrix.trace() - Complex(1.0, 0.0));
  if (tr_err > kTraceTol) {
    throw std::invalid_argument("state trace differs from one beyond tolerance");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(matrix, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kPsdTol) {
    throw std::invalid_argument("state has a negative eigenvalue beyond tolerance");
  }
}

PureState::PureState(std::vector<int> dims_, Vector vector_, std::string label_)
    : dims(std::move(dims_)), vector(std::move(vector_)), label(std::move(label_)) {}

int PureState::dim() const { return static_cast<int>(product_of(dims)); }

void PureState::validate() const {
  check_dims_positive(dims);
  if (vector.size() != product_of(dims)) {
    throw std::invalid_argument("vector length does not match product of dims");
  }
  if (std::abs(vector.norm() - 1.0) > kUnitNormTol) {
    throw std::invalid_argument("pure state vector is not normalized");
  }
}

MultipartiteState PureState::to_state() const {
  return MultipartiteState(dims, vector * vector.adjoint(), label);
}

void CutSpec::validate(int n_parties) const {
  if (side_a.empty() || side_b.empty()) {
    throw std::invalid_argument("cut requires nonempty sides A and B");
  }
  std::vector<int> seen(static_cast<size_t>(n_parties), 0);
  auto mark = [&](const std::vector<int>& side) {
    for (int q : side) {
      if (q < 0 || q >= n_parties) throw std::invalid_argument("cut index out of range");
      if (seen[static_cast<size_t>(q)]++) throw std::invalid_argument("cut sides overlap");
    }
  };
  mark(side_a);
  mark(side_b);
  mark(side_c);
  for (int q = 0; q < n_parties; ++q) {
    if (!seen[static_cast<size_t>(q)]) {
      throw std::invalid_argument("cut does not cover every subsystem");
    }
  }
}

CutSpec CutSpec::parse(const std::string& text, int n_parties) {
  std::vector<std::vector<int>> sides;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, '|')) sides.push_back(parse_index_list(part));
  if (sides.size() != 2 && sides.size() != 3) {
    throw std::invalid_argument("cut spec needs two or three sides: " + text);
  }
  CutSpec cut;
  cut.side_a = sides[0];
  cut.side_b = sides[1];
  if (sides.size() == 3) cut.side_c = sides[2];
  cut.validate(n_parties);
  return cut;
}

std::string CutSpec::str() const {
  auto join = [](const std::vector<int>& side) {
    std::string out;
    for (size_t i = 0; i < side.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(side[i]);
    }
    return out;
  };
  std::string out = join(side_a) + "|" + join(side_b);
  if (!side_c.empty()) out += "|" + join(side_c);
  return out;
}

long side_dimension(const std::vector<int>& side, const std::vector<int>& dims) {
  long p = 1;
  for (int q : side) {
    if (q < 0 || q >= static_cast<int>(dims.size())) {
      throw std::invalid_argument("side index out of range");
    }
    p *= dims[static_cast<size_t>(q)];
  }
  return p;
}

MultipartiteState tensor(const MultipartiteState& a, const MultipartiteState& b) {
  const long d = static_cast<long>(a.dim()) * b.dim();
  if (d > dimension_cap()) {
    throw std::invalid_argument("tensor product exceeds the dimension cap");
  }
  std::vector<int> dims = a.dims;
  dims.insert(dims.end(), b.dims.begin(), b.dims.end());
  Matrix m = Eigen::kroneckerProduct(a.matrix, b.matrix);
  return MultipartiteState(std::move(dims), std::move(m));
}

PureState tensor(const PureState& a, const PureState& b) {
  const long d = static_cast<long>(a.dim()) * b.dim();
  if (d > dimension_cap()) {
    throw std::invalid_argument("tensor product exceeds the dimension cap");
  }
  std::vector<int> dims = a.dims;
  dims.insert(dims.end(), b.dims.begin(), b.dims.end());
  Vector v(d);
  for (long i = 0; i < a.vector.size(); ++i) {
    v.segment(i * b.vector.size(), b.vector.size()) = a.vector(i) * b.vector;
  }
  return PureState(std::move(dims), std::move(v));
}

MultipartiteState partial_trace(const MultipartiteState& rho, const std::vector<int>& keep) {
  const int n = rho.parties();
  if (keep.empty()) throw std::invalid_argument("partial trace must keep at least one subsystem");
  std::vector<int> kept = keep;
  std::sort(kept.begin(), kept.end());
  if (std::unique(kept.begin(), kept.end()) != kept.end()) {
    throw std::invalid_argument("duplicate subsystem in keep set");
  }
  if (kept.front() < 0 || kept.back() >= n) {
    throw std::invalid_argument("keep index out of range");
  }
  std::vector<int> traced;
  for (int q = 0, j = 0; q < n; ++q) {
    if (j < static_cast<int>(kept.size()) && kept[static_cast<size_t>(j)] == q) {
      ++j;
    } else {
      traced.push_back(q);
    }
  }

  const auto stride = subsystem_strides(rho.dims);
  const auto keep_off = enumerate_offsets(kept, rho.dims, stride);
  const long dk = static_cast<long>(keep_off.size());

  std::vector<int> out_dims;
  out_dims.reserve(kept.size());
  for (int q : kept) out_dims.push_back(rho.dims[static_cast<size_t>(q)]);

  Matrix out = Matrix::Zero(dk, dk);
  if (traced.empty()) {
    out = rho.matrix;
  } else {
    const auto tr_off = enumerate_offsets(traced, rho.dims, stride);
    for (long i = 0; i < dk; ++i) {
      for (long j = 0; j < dk; ++j) {
        Complex acc(0.0, 0.0);
        for (long t : tr_off) {
          acc += rho.matrix(keep_off[static_cast<size_t>(i)] + t,
                            keep_off[static_cast<size_t>(j)] + t);
        }
        out(i, j) = acc;
      }
    }
  }
  return MultipartiteState(std::move(out_dims), std::move(out), rho.label);
}

double von_neumann_entropy(const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  return shannon_entropy(es.eigenvalues());
}

double von_neumann_entropy(const MultipartiteState& rho) {
  return von_neumann_entropy(rho.matrix);
}

double shannon_entropy(const RealVector& p) {
  double s = 0.0;
  for (long i = 0; i < p.size(); ++i) {
    const double v = p(i);
    if (v > kEigenvalueClip) s -= v * std::log2(v);
  }
  return s;
}

double trace_distance(const Matrix& a, const Matrix& b) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a - b, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const MultipartiteState& a, const MultipartiteState& b) {
  if (a.dims != b.dims) throw std::invalid_argument("trace distance requires matching dims");
  return trace_distance(a.matrix, b.matrix);
}

PureState purify(const MultipartiteState& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix);
  const long d = rho.matrix.rows();
  std::vector<int> kept_idx;
  for (long i = 0; i < d; ++i) {
    if (es.eigenvalues()(i) > kEigenvalueClip) kept_idx.push_back(static_cast<int>(i));
  }
  const long r = std::max<long>(1, static_cast<long>(kept_idx.size()));
  Vector psi = Vector::Zero(d * r);
  if (kept_idx.empty()) {
    // Degenerate input with numerically vanishing spectrum; fall back to
    // the largest eigenvector so the output is still a unit vector.
    psi.segment(0, d) = es.eigenvectors().col(d - 1);
  } else {
    for (long a = 0; a < r; ++a) {
      const int i = kept_idx[static_cast<size_t>(a)];
      const double w = std::sqrt(es.eigenvalues()(i));
      for (long row = 0; row < d; ++row) {
        psi(row * r + a) = w * es.eigenvectors()(row, i);
      }
    }
    psi.normalize();
  }
  return PureState({static_cast<int>(d), static_cast<int>(r)}, std::move(psi), rho.label);
}

MultipartiteState permute_subsystems(const MultipartiteState& rho, const std::vector<int>& order) {
  const int n = rho.parties();
  if (static_cast<int>(order.size()) != n) {
    throw std::invalid_argument("permutation length does not match party count");
  }
  std::vector<int> seen(static_cast<size_t>(n), 0);
  for (int q : order) {
    if (q < 0 || q >= n || seen[static_cast<size_t>(q)]++) {
      throw std::invalid_argument("order is not a permutation of subsystem indices");
    }
  }
  std::vector<int> new_dims(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) new_dims[static_cast<size_t>(i)] = rho.dims[static_cast<size_t>(order[static_cast<size_t>(i)])];

  const auto old_stride = subsystem_strides(rho.dims);
  const auto new_stride = subsystem_strides(new_dims);
  const long d = rho.matrix.rows();
  // map[new_index] = old_index, built by carrying each new digit to its
  // source subsystem's stride in the old ordering.
  std::vector<long> map(static_cast<size_t>(d));
  for (long idx = 0; idx < d; ++idx) {
    long rem = idx;
    long old_idx = 0;
    for (int i = 0; i < n; ++i) {
      const long digit = rem / new_stride[static_cast<size_t>(i)];
      rem %= new_stride[static_cast<size_t>(i)];
      old_idx += digit * old_stride[static_cast<size_t>(order[static_cast<size_t>(i)])];
    }
    map[static_cast<size_t>(idx)] = old_idx;
  }
  Matrix out(d, d);
  for (long i = 0; i < d; ++i) {
    for (long j = 0; j < d; ++j) {
      out(i, j) = rho.matrix(map[static_cast<size_t>(i)], map[static_cast<size_t>(j)]);
    }
  }
  return MultipartiteState(std::move(new_dims), std::move(out), rho.label);
}

PureState permute_subsystems(const PureState& psi, const std::vector<int>& order) {
  const int n = psi.parties();
  if (static_cast<int>(order.size()) != n) {
    throw std::invalid_argument("permutation length does not match party count");
  }
  std::vector<int> seen(static_cast<size_t>(n), 0);
  for (int q : order) {
    if (q < 0 || q >= n || seen[static_cast<size_t>(q)]++) {
      throw std::invalid_argument("order is not a permutation of subsystem indices");
    }
  }
  std::vector<int> new_dims(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) new_dims[static_cast<size_t>(i)] = psi.dims[static_cast<size_t>(order[static_cast<size_t>(i)])];
  const auto old_stride = subsystem_strides(psi.dims);
  const auto new_stride = subsystem_strides(new_dims);
  const long d = psi.vector.size();
  Vector out(d);
  for (long idx = 0; idx < d; ++idx) {
    long rem = idx;
    long old_idx = 0;
    for (int i = 0; i < n; ++i) {
      const long digit = rem / new_stride[static_cast<size_t>(i)];
      rem %= new_stride[static_cast<size_t>(i)];
      old_idx += digit * old_stride[static_cast<size_t>(order[static_cast<size_t>(i)])];
    }
    out(idx) = psi.vector(old_idx);
  }
  return PureState(std::move(new_dims), std::move(out), psi.label);
}

namespace {

std::vector<int> cut_order(const CutSpec& cut) {
  std::vector<int> order = cut.side_a;
  order.insert(order.end(), cut.side_b.begin(), cut.side_b.end());
  order.insert(order.end(), cut.side_c.begin(), cut.side_c.end());
  return order;
}

bool is_identity_order(const std::vector<int>& order) {
  for (size_t i = 0; i < order.size(); ++i) {
    if (order[i] != static_cast<int>(i)) return false;
  }
  return true;
}

}  // namespace

MultipartiteState regroup_bipartite(const MultipartiteState& rho, const CutSpec& cut) {
  cut.validate(rho.parties());
  const auto order = cut_order(cut);
  const int da = static_cast<int>(side_dimension(cut.side_a, rho.dims));
  std::vector<int> rest = cut.side_b;
  rest.insert(rest.end(), cut.side_c.begin(), cut.side_c.end());
  const int db = static_cast<int>(side_dimension(rest, rho.dims));
  MultipartiteState out =
      is_identity_order(order) ? rho : permute_subsystems(rho, order);
  out.dims = {da, db};
  return out;
}

PureState regroup_bipartite(const PureState& psi, const CutSpec& cut) {
  cut.validate(psi.parties());
  const auto order = cut_order(cut);
  const int da = static_cast<int>(side_dimension(cut.side_a, psi.dims));
  std::vector<int> rest = cut.side_b;
  rest.insert(rest.end(), cut.side_c.begin(), cut.side_c.end());
  const int db = static_cast<int>(side_dimension(rest, psi.dims));
  PureState out = is_identity_order(order) ? psi : permute_subsystems(psi, order);
  out.dims = {da, db};
  return out;
}

RealVector schmidt_spectrum(const Vector& psi, int d_a, int d_b) {
  if (psi.size() != static_cast<long>(d_a) * d_b) {
    throw std::invalid_argument("vector length does not match d_a * d_b");
  }
  Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
      psi.data(), d_a, d_b);
  if (d_a <= d_b) {
    Matrix red = m * m.adjoint();
    Eigen::SelfAdjointEigenSolver<Matrix> es(red, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }
  Matrix red = m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<Matrix> es(red, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

PureState dominant_eigenvector(const MultipartiteState& rho) {
  if (rho.purity() < 1.0 - kPurityTol) {
    throw std::invalid_argument("state is not pure within tolerance");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix);
  const long d = rho.matrix.rows();
  Vector v = es.eigenvectors().col(d - 1);
  v.normalize();
  return PureState(rho.dims, std::move(v), rho.label);
}

}  // namespace entbound
