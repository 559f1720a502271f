#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "entbound/antisym.hpp"
#include "entbound/product_overlap.hpp"
#include "entbound/qstate.hpp"
#include "entbound/random.hpp"
#include "test_helpers.hpp"

using namespace entbound;
using namespace entbound::testing;

namespace {

double recompute(const ProductOverlapResult& r, const MultipartiteState& flat) {
  Vector product(flat.dim());
  const int db = flat.dims[1];
  for (int i = 0; i < flat.dims[0]; ++i) {
    for (int j = 0; j < db; ++j) {
      product(static_cast<long>(i) * db + j) = r.x.vector(i) * r.y.vector(j);
    }
  }
  return (product.adjoint() * flat.matrix * product)(0, 0).real();
}

}  // namespace

TEST_CASE("product input recovers itself with overlap one") {
  SeededSampler sampler(51);
  const PureState a = haar_pure(3, sampler);
  const PureState b = haar_pure(4, sampler);
  const MultipartiteState rho = tensor(a.to_state(), b.to_state());
  const ProductOverlapResult r = max_product_overlap(rho, CutSpec::parse("0|1", 2));
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(std::abs(r.x.vector.dot(a.vector)) - 1.0) < 1e-6);
  CHECK(std::abs(std::abs(r.y.vector.dot(b.vector)) - 1.0) < 1e-6);
}

TEST_CASE("Bell state overlap is one half") {
  const ProductOverlapResult r = max_product_overlap(bell_state(), CutSpec::parse("0|1", 2));
  CHECK(r.value == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("maximally mixed states have flat overlap") {
  OverlapOptions options;
  options.restarts = 8;
  const ProductOverlapResult r2 =
      max_product_overlap(maximally_mixed({2, 2}), CutSpec::parse("0|1", 2), options);
  CHECK(r2.value == doctest::Approx(0.25).epsilon(1e-9));
  const ProductOverlapResult r3 =
      max_product_overlap(maximally_mixed({3, 3}), CutSpec::parse("0|1", 2), options);
  CHECK(r3.value == doctest::Approx(1.0 / 9.0).epsilon(1e-9));
}

TEST_CASE("pure bipartite overlaps match the largest Schmidt weight") {
  SeededSampler sampler(52);
  for (int i = 0; i < 5; ++i) {
    Vector v = haar_pure(12, sampler).vector;
    const PureState psi({3, 4}, v);
    const RealVector spectrum = schmidt_spectrum(v, 3, 4);
    const double top = spectrum.maxCoeff();
    const ProductOverlapResult r =
        max_product_overlap(psi.to_state(), CutSpec::parse("0|1", 2));
    CHECK(r.value == doctest::Approx(top).epsilon(1e-8));
  }
}

TEST_CASE("overlap results recompute and respect spectral limits") {
  SeededSampler sampler(53);
  const MultipartiteState rho = induced_bipartite(3, 4, sampler);
  const CutSpec cut = CutSpec::parse("0|1", 2);
  const ProductOverlapResult r = max_product_overlap(rho, cut);

  CHECK(std::abs(recompute(r, rho) - r.value) < 1e-9);

  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix, Eigen::EigenvaluesOnly);
  CHECK(r.value <= es.eigenvalues().maxCoeff() + 1e-12);
  CHECK(r.value >= 1.0 / 9.0 - 1e-12);
}

TEST_CASE("antisymmetric pair overlap matches the closed form") {
  const MultipartiteState alpha = antisymmetric_state({3, 2});
  const CutSpec cut = CutSpec::parse("0|1", 2);

  OverlapOptions heuristic;
  heuristic.restarts = 64;
  const ProductOverlapResult loose = max_product_overlap(alpha, cut, heuristic);
  CHECK_FALSE(loose.certified_global);
  CHECK(loose.value == doctest::Approx(antisym_pair_overlap(3)).epsilon(1e-6));

  OverlapOptions certified;
  certified.brute_force_small = true;
  const ProductOverlapResult tight = max_product_overlap(alpha, cut, certified);
  CHECK(tight.certified_global);
  CHECK(tight.value == doctest::Approx(1.0 / 6.0).epsilon(1e-7));
}

TEST_CASE("non-bipartite cuts are rejected") {
  CHECK_THROWS_AS(
      max_product_overlap(w_pure().to_state(), CutSpec::parse("0|1|2", 3)),
      std::invalid_argument);
}

TEST_CASE("certified brute-force search matches the alternating search on small states") {
  SeededSampler sampler(54);
  for (int i = 0; i < 3; ++i) {
    const MultipartiteState rho = induced_bipartite(2, 3, sampler);
    OverlapOptions plain;
    plain.restarts = 48;
    OverlapOptions brute;
    brute.brute_force_small = true;
    const double a = max_product_overlap(rho, CutSpec::parse("0|1", 2), plain).value;
    const double b = max_product_overlap(rho, CutSpec::parse("0|1", 2), brute).value;
    CHECK(a <= b + 1e-9);
    CHECK(b - a < 1e-5);
  }
}
