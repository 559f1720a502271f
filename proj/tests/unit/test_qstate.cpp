#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "entbound/qstate.hpp"
#include "entbound/random.hpp"
#include "test_helpers.hpp"

using namespace entbound;
using namespace entbound::testing;

TEST_CASE("tensor of maximally mixed qubits is the maximally mixed two-qubit state") {
  const MultipartiteState half = maximally_mixed({2});
  const MultipartiteState product = tensor(half, half);
  REQUIRE(product.dims == std::vector<int>{2, 2});
  CHECK(trace_distance(product, maximally_mixed({2, 2})) < 1e-14);
}

TEST_CASE("tensor of two Bell pairs stays pure on four qubits") {
  const MultipartiteState pair = bell_state();
  const MultipartiteState both = tensor(pair, pair);
  REQUIRE(both.dims == std::vector<int>{2, 2, 2, 2});
  CHECK(both.purity() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("tensor preserves unit trace on random pairs") {
  SeededSampler sampler(21);
  for (int i = 0; i < 50; ++i) {
    const MultipartiteState a = induced_state(3, 2, sampler);
    const MultipartiteState b = induced_state(2, 3, sampler);
    const MultipartiteState ab = tensor(a, b);
    CHECK(std::abs(ab.matrix.trace().real() - 1.0) < 1e-12);
    CHECK(std::abs(ab.matrix.trace().imag()) < 1e-12);
  }
}

TEST_CASE("tensor rejects products beyond the dimension cap") {
  const MultipartiteState big = maximally_mixed({64});
  CHECK_THROWS_AS(tensor(tensor(big, big), big), std::invalid_argument);
}

TEST_CASE("partial trace of a product state recovers each factor") {
  SeededSampler sampler(22);
  const MultipartiteState a = induced_state(3, 3, sampler);
  const MultipartiteState b = induced_state(4, 2, sampler);
  const MultipartiteState ab = tensor(a, b);
  CHECK(trace_distance(partial_trace(ab, {0}), a) < 1e-12);
  CHECK(trace_distance(partial_trace(ab, {1}), b) < 1e-12);
}

TEST_CASE("partial trace of a Bell pair is maximally mixed") {
  const MultipartiteState reduced = partial_trace(bell_state(), {0});
  REQUIRE(reduced.dims == std::vector<int>{2});
  CHECK(trace_distance(reduced, maximally_mixed({2})) < 1e-12);
}

TEST_CASE("partial trace rejects an empty keep set") {
  CHECK_THROWS_AS(partial_trace(bell_state(), {}), std::invalid_argument);
}

TEST_CASE("partial trace keeps subsystem order and trace") {
  SeededSampler sampler(23);
  const MultipartiteState a = induced_state(2, 2, sampler);
  const MultipartiteState b = induced_state(3, 2, sampler);
  const MultipartiteState c = induced_state(2, 3, sampler);
  const MultipartiteState abc = tensor(tensor(a, b), c);
  const MultipartiteState kept = partial_trace(abc, {2, 0});
  REQUIRE(kept.dims == std::vector<int>{2, 2});
  CHECK(trace_distance(kept, tensor(a, c)) < 1e-12);
}

TEST_CASE("entropy of the maximally mixed state is log2 d") {
  CHECK(von_neumann_entropy(maximally_mixed({3})) ==
        doctest::Approx(std::log2(3.0)).epsilon(1e-12));
  CHECK(von_neumann_entropy(maximally_mixed({2, 2})) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("entropy of a pure state vanishes") {
  SeededSampler sampler(24);
  const PureState psi = haar_pure(6, sampler);
  CHECK(von_neumann_entropy(psi.to_state()) < 1e-9);
}

TEST_CASE("entropy of diag(1/3, 2/3) matches the scalar formula") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0 / 3.0;
  m(1, 1) = 2.0 / 3.0;
  const MultipartiteState rho({2}, m);
  CHECK(von_neumann_entropy(rho) == doctest::Approx(kEntropyOneThird).epsilon(1e-12));
}

TEST_CASE("entropy is invariant under unitary conjugation") {
  SeededSampler sampler(25);
  const MultipartiteState rho = induced_state(5, 3, sampler);
  const Matrix u = random_unitary(5, sampler);
  const MultipartiteState rotated({5}, u * rho.matrix * u.adjoint());
  CHECK(std::abs(von_neumann_entropy(rho) - von_neumann_entropy(rotated)) < 1e-9);
}

TEST_CASE("trace distance basics") {
  const MultipartiteState rho = bell_state();
  CHECK(trace_distance(rho, rho) == doctest::Approx(0.0).epsilon(1e-14));

  Vector e0 = Vector::Zero(2), e1 = Vector::Zero(2);
  e0(0) = 1.0;
  e1(1) = 1.0;
  const MultipartiteState p0 = PureState({2}, e0).to_state();
  const MultipartiteState p1 = PureState({2}, e1).to_state();
  CHECK(trace_distance(p0, p1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(trace_distance(maximally_mixed({2}), p0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("trace distance rejects mismatched dims and is unitarily invariant") {
  CHECK_THROWS_AS(trace_distance(bell_state(), maximally_mixed({2})),
                  std::invalid_argument);

  SeededSampler sampler(26);
  const MultipartiteState a = induced_state(4, 2, sampler);
  const MultipartiteState b = induced_state(4, 4, sampler);
  const Matrix u = random_unitary(4, sampler);
  const MultipartiteState ua({4}, u * a.matrix * u.adjoint());
  const MultipartiteState ub({4}, u * b.matrix * u.adjoint());
  CHECK(std::abs(trace_distance(a, b) - trace_distance(ua, ub)) < 1e-10);
  CHECK(std::abs(trace_distance(a, b) - trace_distance(b, a)) < 1e-12);
}

TEST_CASE("trace distance satisfies the triangle inequality on sampled triples") {
  SeededSampler sampler(27);
  for (int i = 0; i < 10; ++i) {
    const MultipartiteState a = induced_state(3, 2, sampler);
    const MultipartiteState b = induced_state(3, 3, sampler);
    const MultipartiteState c = induced_state(3, 4, sampler);
    CHECK(trace_distance(a, c) <= trace_distance(a, b) + trace_distance(b, c) + 1e-12);
  }
}

TEST_CASE("purification round trip") {
  const PureState purified = purify(maximally_mixed({2}));
  REQUIRE(purified.dims.size() == 2);
  CHECK(purified.dims[0] == 2);
  CHECK(trace_distance(partial_trace(purified.to_state(), {0}), maximally_mixed({2})) < 1e-9);

  SeededSampler sampler(28);
  for (int i = 0; i < 20; ++i) {
    const MultipartiteState rho = induced_state(4, 3, sampler);
    const PureState psi = purify(rho);
    const MultipartiteState back = partial_trace(psi.to_state(), {0});
    CHECK(trace_distance(MultipartiteState({4}, back.matrix), rho) < 1e-9);
  }
}

TEST_CASE("purifying a pure state appends a trivial ancilla") {
  SeededSampler sampler(29);
  const PureState psi = haar_pure(3, sampler);
  const PureState purified = purify(psi.to_state());
  REQUIRE(purified.dims == std::vector<int>{3, 1});
  CHECK(std::abs(std::abs(purified.vector.dot(psi.vector)) - 1.0) < 1e-9);
}

TEST_CASE("marginal entropies of a pure bipartite state agree") {
  SeededSampler sampler(30);
  Vector v = haar_pure(12, sampler).vector;
  const PureState psi({3, 4}, v);
  const MultipartiteState rho = psi.to_state();
  const double sa = von_neumann_entropy(partial_trace(rho, {0}));
  const double sb = von_neumann_entropy(partial_trace(rho, {1}));
  CHECK(std::abs(sa - sb) < 1e-9);
  CHECK(shannon_entropy(schmidt_spectrum(v, 3, 4)) == doctest::Approx(sa).epsilon(1e-9));
}

TEST_CASE("cut specs parse and validate") {
  const CutSpec ab = CutSpec::parse("0|1", 2);
  CHECK(ab.side_a == std::vector<int>{0});
  CHECK(ab.side_b == std::vector<int>{1});
  CHECK_FALSE(ab.tripartite());

  const CutSpec grouped = CutSpec::parse("0,2|1", 3);
  CHECK(grouped.side_a == std::vector<int>{0, 2});
  CHECK(grouped.side_b == std::vector<int>{1});

  const CutSpec abc = CutSpec::parse("0|1|2", 3);
  CHECK(abc.tripartite());
  CHECK(abc.side_c == std::vector<int>{2});

  CHECK_THROWS_AS(CutSpec::parse("0|0", 2), std::invalid_argument);
  CHECK_THROWS_AS(CutSpec::parse("0|1", 3), std::invalid_argument);
  CHECK_THROWS_AS(CutSpec::parse("0", 1), std::invalid_argument);
}

TEST_CASE("state validation rejects broken invariants") {
  Matrix not_hermitian = Matrix::Identity(2, 2) * 0.5;
  not_hermitian(0, 1) = Complex(0.1, 0.0);
  CHECK_THROWS_AS(MultipartiteState({2}, not_hermitian).validate(), std::invalid_argument);

  Matrix wrong_trace = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(MultipartiteState({2}, wrong_trace).validate(), std::invalid_argument);

  Matrix negative = Matrix::Zero(2, 2);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  CHECK_THROWS_AS(MultipartiteState({2}, negative).validate(), std::invalid_argument);

  CHECK_THROWS_AS(MultipartiteState({3}, Matrix::Identity(2, 2) * 0.5).validate(),
                  std::invalid_argument);
}

TEST_CASE("regroup and permute agree with direct construction") {
  SeededSampler sampler(31);
  const MultipartiteState a = induced_state(2, 2, sampler);
  const MultipartiteState b = induced_state(3, 2, sampler);
  const MultipartiteState ab = tensor(a, b);
  const MultipartiteState ba = permute_subsystems(ab, {1, 0});
  CHECK(trace_distance(ba, tensor(b, a)) < 1e-12);

  const CutSpec cut = CutSpec::parse("1|0", 2);
  const MultipartiteState regrouped = regroup_bipartite(ab, cut);
  REQUIRE(regrouped.dims == std::vector<int>{3, 2});
  CHECK(trace_distance(regrouped, tensor(b, a)) < 1e-12);
}

TEST_CASE("dominant eigenvector requires a nearly pure input") {
  const MultipartiteState pure = bell_state();
  const PureState top = dominant_eigenvector(pure);
  CHECK(std::abs(std::abs(top.vector.dot(bell_pure().vector)) - 1.0) < 1e-9);
  CHECK_THROWS_AS(dominant_eigenvector(maximally_mixed({2, 2})), std::invalid_argument);
}
