#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <stdexcept>

#include "entbound/random.hpp"
#include "entbound/serialization.hpp"
#include "test_helpers.hpp"

using namespace entbound;
using namespace entbound::testing;

TEST_CASE("density records round trip exactly") {
  SeededSampler sampler(41);
  const MultipartiteState rho = induced_bipartite(3, 2, sampler);
  const Json record = to_json(rho);
  const MultipartiteState back = state_from_json(record);
  REQUIRE(back.dims == rho.dims);
  CHECK((back.matrix - rho.matrix).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("pure records round trip and load as rank-one states") {
  SeededSampler sampler(42);
  const PureState psi = haar_pure(6, sampler);
  const Json record = to_json(psi);
  CHECK(is_pure_record(record));
  CHECK_FALSE(is_pure_record(to_json(psi.to_state())));

  const PureState back = pure_from_json(record);
  CHECK((back.vector - psi.vector).cwiseAbs().maxCoeff() < 1e-15);

  const auto path = std::filesystem::temp_directory_path() / "entbound_pure_record.json";
  write_json_file(path.string(), record);
  const MultipartiteState loaded = load_state(path.string());
  CHECK(loaded.purity() == doctest::Approx(1.0).epsilon(1e-10));
  std::remove(path.string().c_str());
}

TEST_CASE("labels survive the round trip") {
  const MultipartiteState rho = bell_state();
  const Json record = to_json(rho);
  CHECK(record["label"] == "bell");
  CHECK(state_from_json(record).label == "bell");
}

TEST_CASE("malformed records are rejected") {
  const Json no_dims{{"re", {1.0}}, {"im", {0.0}}};
  CHECK_THROWS_AS(state_from_json(no_dims), std::invalid_argument);

  Json short_arrays = to_json(maximally_mixed({2}));
  short_arrays["re"] = {1.0};
  CHECK_THROWS_AS(state_from_json(short_arrays), std::invalid_argument);

  // A record whose matrix breaks the unit-trace invariant must fail
  // on read even though its arrays are well formed.
  Json bad_trace = to_json(maximally_mixed({2}));
  bad_trace["re"] = {1.0, 0.0, 0.0, 1.0};
  CHECK_THROWS_AS(state_from_json(bad_trace), std::invalid_argument);

  Json bad_norm = to_json(bell_pure());
  bad_norm["vec_re"] = {1.0, 0.0, 0.0, 1.0};
  bad_norm["vec_im"] = {0.0, 0.0, 0.0, 0.0};
  CHECK_THROWS_AS(pure_from_json(bad_norm), std::invalid_argument);
}

TEST_CASE("file round trip preserves a density record") {
  SeededSampler sampler(43);
  const MultipartiteState rho = induced_state(4, 4, sampler);
  const auto path = std::filesystem::temp_directory_path() / "entbound_state_record.json";
  write_json_file(path.string(), to_json(rho));
  const MultipartiteState loaded = load_state(path.string());
  CHECK(trace_distance(loaded, rho) < 1e-12);
  CHECK_THROWS_AS(read_json_file((path.string() + ".missing")), std::runtime_error);
  std::remove(path.string().c_str());
}
