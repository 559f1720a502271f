#include "entbound/product_overlap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace entbound {

namespace {

// M_y[a, a'] = sum_{b, b'} m[(a,b), (a',b')] conj(y_b) y_{b'}; the
// operator whose top eigenvector is the optimal side-A factor for a
// fixed side-B factor y.
Matrix contract_side_b(const Matrix& m, int d_a, int d_b, const Vector& y) {
  Matrix out(d_a, d_a);
  for (int a = 0; a < d_a; ++a) {
    for (int ap = 0; ap < d_a; ++ap) {
      out(a, ap) = (y.adjoint() * (m.block(a * d_b, ap * d_b, d_b, d_b) * y))(0);
    }
  }
  return out;
}

// M_x[b, b'] = sum_{a, a'} conj(x_a) x_{a'} m[(a,b), (a',b')].
Matrix contract_side_a(const Matrix& m, int d_a, int d_b, const Vector& x) {
  Matrix out = Matrix::Zero(d_b, d_b);
  for (int a = 0; a < d_a; ++a) {
    for (int ap = 0; ap < d_a; ++ap) {
      out.noalias() += std::conj(x(a)) * x(ap) * m.block(a * d_b, ap * d_b, d_b, d_b);
    }
  }
  return out;
}

// Top eigenvector and eigenvalue of a Hermitian matrix.
std::pair<double, Vector> top_eigenpair(const Matrix& h) {
  if (h.rows() == 1) {
    Vector v(1);
    v(0) = Complex(1.0, 0.0);
    return {h(0, 0).real(), v};
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es((h + h.adjoint()) / 2.0);
  const long last = h.rows() - 1;
  Vector v = es.eigenvectors().col(last);
  v.normalize();
  return {es.eigenvalues()(last), v};
}

double product_overlap(const Matrix& m, int d_a, int d_b, const Vector& x, const Vector& y) {
  Vector xy(static_cast<long>(d_a) * d_b);
  for (int a = 0; a < d_a; ++a) xy.segment(a * d_b, d_b) = x(a) * y;
  return (xy.adjoint() * (m * xy))(0).real();
}

Vector random_direction(SeededSampler& sampler, int dim) {
  if (dim == 1) {
    Vector v(1);
    v(0) = Complex(1.0, 0.0);
    return v;
  }
  Vector v = sampler.ginibre(dim, 1).col(0);
  v.normalize();
  return v;
}

struct AscentOutcome {
  double value = 0.0;
  Vector x, y;
  int iterations = 0;
  bool converged = false;
};

AscentOutcome alternating_ascent(const Matrix& m, int d_a, int d_b, Vector x, Vector y,
                                 double tol, int max_iters) {
  AscentOutcome out;
  double value = product_overlap(m, d_a, d_b, x, y);
  for (int it = 0; it < max_iters; ++it) {
    auto [val_y, y_new] = top_eigenpair(contract_side_a(m, d_a, d_b, x));
    if (val_y < value - 1e-12) {
      throw std::runtime_error("alternating ascent lost monotonicity on the B step");
    }
    y = std::move(y_new);
    auto [val_x, x_new] = top_eigenpair(contract_side_b(m, d_a, d_b, y));
    if (val_x < val_y - 1e-12) {
      throw std::runtime_error("alternating ascent lost monotonicity on the A step");
    }
    x = std::move(x_new);
    out.iterations = it + 1;
    if (val_x - value < tol) {
      value = std::max(value, val_x);
      out.converged = true;
      break;
    }
    value = val_x;
  }
  out.value = value;
  out.x = std::move(x);
  out.y = std::move(y);
  return out;
}

}  // namespace

ProductOverlapResult max_product_overlap_matrix(const Matrix& m, int d_a, int d_b,
                                                const OverlapOptions& options,
                                                SeededSampler& sampler, const Vector* warm_x,
                                                const Vector* warm_y) {
  const long d = static_cast<long>(d_a) * d_b;
  if (m.rows() != d || m.cols() != d) {
    throw std::invalid_argument("matrix side does not match d_a * d_b");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  const double lambda_max = es.eigenvalues()(d - 1);

  const bool exhaustive = options.brute_force_small && d <= 16;
  const int restarts = exhaustive ? std::max(options.restarts, 512) : std::max(options.restarts, 1);
  const double tol = exhaustive ? std::min(options.tol, 1e-13) : options.tol;
  const int max_iters = exhaustive ? std::max(options.max_iters, 1000) : options.max_iters;

  ProductOverlapResult best;
  best.value = -1.0;
  int used = 0;
  auto consider = [&](Vector x0, Vector y0) {
    AscentOutcome run = alternating_ascent(m, d_a, d_b, std::move(x0), std::move(y0), tol, max_iters);
    ++used;
    if (run.value > best.value) {
      best.value = run.value;
      best.x = PureState({d_a}, std::move(run.x));
      best.y = PureState({d_b}, std::move(run.y));
      best.iterations = run.iterations;
      best.converged = run.converged;
    }
    // The overlap can never exceed the top eigenvalue, so reaching it
    // certifies global optimality.
    return best.value >= lambda_max - std::max(tol, 1e-12);
  };

  bool hit_ceiling = false;
  if (warm_x && warm_y) {
    hit_ceiling = consider(*warm_x, *warm_y);
  }
  if (exhaustive && !hit_ceiling) {
    // Seed every computational basis pair before the random fan.
    for (int a = 0; a < d_a && !hit_ceiling; ++a) {
      for (int b = 0; b < d_b && !hit_ceiling; ++b) {
        Vector x0 = Vector::Zero(d_a);
        Vector y0 = Vector::Zero(d_b);
        x0(a) = Complex(1.0, 0.0);
        y0(b) = Complex(1.0, 0.0);
        hit_ceiling = consider(std::move(x0), std::move(y0));
      }
    }
  }
  while (!hit_ceiling && used < restarts) {
    hit_ceiling = consider(random_direction(sampler, d_a), random_direction(sampler, d_b));
  }
  best.restarts_used = used;

  // Report the recomputed overlap of the winning factors.
  best.value = product_overlap(m, d_a, d_b, best.x.vector, best.y.vector);
  if (best.value > lambda_max + 1e-9) {
    throw std::runtime_error("product overlap exceeds the top eigenvalue");
  }
  if (hit_ceiling) {
    best.certified_global = true;
    best.tol = std::max(lambda_max - best.value, 0.0) + 1e-12;
  } else if (exhaustive) {
    best.certified_global = true;
    best.tol = 1e-9;
  }
  return best;
}

ProductOverlapResult max_product_overlap(const MultipartiteState& rho, const CutSpec& cut,
                                         const OverlapOptions& options) {
  if (cut.tripartite()) {
    throw std::invalid_argument("product overlap requires a bipartite cut");
  }
  const MultipartiteState flat = regroup_bipartite(rho, cut);
  SeededSampler sampler(options.seed, 0x6f766572u);
  return max_product_overlap_matrix(flat.matrix, flat.dims[0], flat.dims[1], options, sampler);
}

}  // namespace entbound
