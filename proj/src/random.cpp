#include "entbound/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace entbound {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
  // Two rounds of splitmix64 decorrelate nearby (seed, stream) pairs.
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(~stream)));
}

}  // namespace

SeededSampler::SeededSampler(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(make_engine(seed, stream)) {}

SeededSampler SeededSampler::for_trial(std::uint64_t trial) const {
  return SeededSampler(seed_ ^ splitmix64(trial + 1), stream_);
}

double SeededSampler::uniform() {
  // 53 random bits mapped to [0, 1).
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double SeededSampler::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller; u1 is shifted into (0, 1] so the log is finite.
  const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(angle);
  has_spare_ = true;
  return r * std::cos(angle);
}

Complex SeededSampler::complex_gaussian() {
  const double re = gaussian();
  const double im = gaussian();
  return Complex(re, im);
}

Matrix SeededSampler::ginibre(int rows, int cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("ginibre needs positive shape");
  Matrix g(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      g(i, j) = complex_gaussian();
    }
  }
  return g;
}

PureState haar_pure(int dim, SeededSampler& sampler) {
  if (dim < 1) throw std::invalid_argument("haar_pure needs dim >= 1");
  if (dim == 1) {
    Vector v(1);
    v(0) = Complex(1.0, 0.0);
    return PureState({1}, std::move(v), "haar");
  }
  Vector v = sampler.ginibre(dim, 1).col(0);
  v.normalize();
  return PureState({dim}, std::move(v), "haar");
}

MultipartiteState induced_state(int n, int s, SeededSampler& sampler) {
  if (n < 1 || s < 1) throw std::invalid_argument("induced state needs n, s >= 1");
  const Matrix g = sampler.ginibre(n, s);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  // Round off the solver's asymmetry noise so the invariant checks see
  // an exactly Hermitian matrix.
  rho = ((rho + rho.adjoint()) / 2.0).eval();
  return MultipartiteState({n}, std::move(rho), "induced");
}

MultipartiteState induced_bipartite(int d, int s, SeededSampler& sampler) {
  if (d < 2) throw std::invalid_argument("induced_bipartite needs d >= 2");
  MultipartiteState rho = induced_state(d * d, s, sampler);
  rho.dims = {d, d};
  rho.label = "induced-bipartite";
  return rho;
}

std::vector<PureState> random_subspace(int ambient, int dim, SeededSampler& sampler) {
  if (dim < 1 || ambient < 1) throw std::invalid_argument("subspace needs positive dimensions");
  if (dim > ambient) throw std::invalid_argument("subspace dimension exceeds ambient space");
  const Matrix g = sampler.ginibre(ambient, dim);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(ambient, dim);
  std::vector<PureState> basis;
  basis.reserve(static_cast<size_t>(dim));
  for (int j = 0; j < dim; ++j) {
    Vector v = q.col(j);
    v.normalize();
    basis.emplace_back(std::vector<int>{ambient}, std::move(v), "subspace-basis");
  }
  return basis;
}

MultipartiteState random_tripartite_induced(int d, int s, SeededSampler& sampler) {
  if (d < 2) throw std::invalid_argument("tripartite induced state needs d >= 2");
  const long total = static_cast<long>(d) * d * d;
  if (total > dimension_cap()) {
    throw std::invalid_argument("tripartite state exceeds the dimension cap");
  }
  MultipartiteState rho = induced_state(static_cast<int>(total), s, sampler);
  rho.dims = {d, d, d};
  rho.label = "induced-tripartite";
  return rho;
}

Matrix random_unitary(int dim, SeededSampler& sampler) {
  if (dim < 1) throw std::invalid_argument("random_unitary needs dim >= 1");
  const Matrix g = sampler.ginibre(dim, dim);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase ambiguity of QR so the result is Haar distributed.
  for (int j = 0; j < dim; ++j) {
    const Complex rjj = r(j, j);
    const double mag = std::abs(rjj);
    q.col(j) *= (mag > 0.0) ? rjj / mag : Complex(1.0, 0.0);
  }
  return q;
}

}  // namespace entbound
