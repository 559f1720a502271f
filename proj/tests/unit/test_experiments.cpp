#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "entbound/experiments.hpp"
#include "entbound/qstate.hpp"
#include "test_helpers.hpp"

using namespace entbound;
using entbound::testing::kHalfInvLn2;

namespace {

ExperimentConfig make_config(const std::string& kind, int d, int s, int n, int trials,
                             std::uint64_t seed) {
  ExperimentConfig config;
  config.kind = kind;
  config.d = d;
  config.s = s;
  config.n = n;
  config.trials = trials;
  config.seed = seed;
  return config;
}

}  // namespace

TEST_CASE("config validation rejects malformed experiment requests") {
  CHECK_THROWS_AS(make_config("bogus-kind", 2, 2, 0, 1, 1).validate(), std::invalid_argument);
  CHECK_THROWS_AS(make_config("page-entropy", 0, 8, 4, 0, 1).validate(), std::invalid_argument);
  CHECK_THROWS_AS(make_config("page-entropy", 0, 8, 4, -3, 1).validate(), std::invalid_argument);
  CHECK_THROWS_AS(make_config("page-entropy", 0, 0, 4, 1, 1).validate(), std::invalid_argument);

  // The environment cannot exceed the system for the page setup.
  CHECK_THROWS_AS(make_config("page-entropy", 0, 9, 4, 1, 1).validate(), std::invalid_argument);
  CHECK_NOTHROW(make_config("page-entropy", 0, 4, 4, 1, 1).validate());

  CHECK_THROWS_AS(make_config("subspace-entropy", 2, 5, 0, 1, 1).validate(),
                  std::invalid_argument);
  CHECK_NOTHROW(make_config("subspace-entropy", 2, 4, 0, 1, 1).validate());

  CHECK_THROWS_AS(make_config("ef-typical", 3, 10, 0, 1, 1).validate(), std::invalid_argument);
  CHECK_NOTHROW(make_config("ef-typical", 3, 9, 0, 1, 1).validate());

  ExperimentConfig scan = make_config("nonmono-scan", 2, 1, 0, 1, 1);
  scan.estimator = "not-a-measure";
  CHECK_THROWS_AS(scan.validate(), std::invalid_argument);
  scan.estimator = "tangle";
  CHECK_NOTHROW(scan.validate());
}

TEST_CASE("er-typical configs outside the interesting regime are rejected with a hint") {
  ExperimentConfig low = make_config("er-typical", 4, 2, 0, 1, 1);
  bool threw = false;
  try {
    low.validate();
  } catch (const std::invalid_argument& err) {
    threw = true;
    CHECK(std::string(err.what()).find("non-trivial only in the regime") != std::string::npos);
  }
  CHECK(threw);

  CHECK_THROWS_AS(make_config("er-typical", 4, 17, 0, 1, 1).validate(), std::invalid_argument);
  CHECK_NOTHROW(make_config("er-typical", 4, 4, 0, 1, 1).validate());
  CHECK_NOTHROW(make_config("er-typical", 4, 16, 0, 1, 1).validate());
}

TEST_CASE("configs survive a json round trip including defaults") {
  nlohmann::json sparse{{"kind", "page-entropy"}, {"n", 8}, {"s", 2}};
  const ExperimentConfig config = ExperimentConfig::from_json(sparse);
  CHECK(config.trials == 1);
  CHECK(config.seed == 1);
  CHECK(config.tol == doctest::Approx(0.5));

  const ExperimentConfig again = ExperimentConfig::from_json(config.to_json());
  CHECK(again.to_json().dump() == config.to_json().dump());

  // Scan configs carry their extra knobs through the round trip.
  ExperimentConfig scan = make_config("nonmono-scan", 2, 1, 0, 3, 7);
  scan.estimator = "tangle";
  scan.c = 0.25;
  const nlohmann::json j = scan.to_json();
  CHECK(j.at("estimator") == "tangle");
  CHECK(j.at("c") == doctest::Approx(0.25));
  const ExperimentConfig back = ExperimentConfig::from_json(j);
  CHECK(back.estimator == "tangle");
  CHECK(back.c == doctest::Approx(0.25));

  // Non-scan configs do not leak the scan-only fields.
  CHECK(!config.to_json().contains("estimator"));

  nlohmann::json bad{{"kind", "page-entropy"}, {"n", 4}, {"s", 8}};
  CHECK_THROWS_AS(ExperimentConfig::from_json(bad), std::invalid_argument);
}

TEST_CASE("page entropy runs match the asymptotic prediction") {
  const ExperimentConfig config = make_config("page-entropy", 0, 4, 16, 300, 21);
  const ExperimentResult result = run_page_entropy(config);

  REQUIRE(result.records.size() == 300);
  const double predicted = result.summary.at("predicted").get<double>();
  CHECK(predicted == doctest::Approx(2.0 - 4.0 / 16.0 * kHalfInvLn2).epsilon(1e-12));
  CHECK(result.summary.at("mean").get<double>() == doctest::Approx(predicted).epsilon(0.05));
  CHECK(result.summary.at("abs_error").get<double>() < 0.1);

  for (const auto& record : result.records) {
    const double entropy = record.at("entropy").get<double>();
    CHECK(entropy >= -1e-12);
    CHECK(entropy <= 2.0 + 1e-9);
  }
}

TEST_CASE("a one dimensional environment always yields a pure marginal") {
  const ExperimentConfig config = make_config("page-entropy", 0, 1, 12, 20, 5);
  const ExperimentResult result = run_page_entropy(config);
  for (const auto& record : result.records) {
    CHECK(record.at("entropy").get<double>() == 0.0);
  }
  CHECK(result.summary.at("mean").get<double>() == 0.0);
}

TEST_CASE("entropy fluctuations shrink as the system grows at fixed ratio") {
  std::vector<double> stdevs;
  const int systems[3] = {8, 16, 32};
  for (int i = 0; i < 3; ++i) {
    const ExperimentConfig config =
        make_config("page-entropy", 0, systems[i] / 4, systems[i], 200, 31);
    stdevs.push_back(run_page_entropy(config).summary.at("stdev").get<double>());
  }
  CHECK(stdevs[1] < stdevs[0]);
  CHECK(stdevs[2] < stdevs[1]);
}

TEST_CASE("overlap statistics concentrate around one over the system dimension") {
  const ExperimentConfig config = make_config("overlap", 0, 8, 16, 200, 13);
  const ExperimentResult result = run_overlap(config);

  REQUIRE(result.records.size() == 200);
  CHECK(result.summary.at("predicted_mean").get<double>() == doctest::Approx(1.0 / 16.0));
  CHECK(std::abs(result.summary.at("mean_overlap").get<double>() - 1.0 / 16.0) < 0.01);
  const double sqrt_scale = result.summary.at("sqrt_scale").get<double>();
  CHECK(sqrt_scale == doctest::Approx(3.0 / std::sqrt(128.0)).epsilon(1e-12));
  CHECK(result.summary.at("stdev_sqrt_overlap").get<double>() < sqrt_scale);
  for (const auto& record : result.records) {
    const double overlap = record.at("overlap").get<double>();
    CHECK(overlap > 0.0);
    CHECK(overlap < 1.0);
  }
}

TEST_CASE("subspace sweeps report sensible minima and repeat bit for bit") {
  ExperimentConfig config = make_config("subspace-entropy", 2, 2, 25, 3, 41);
  const ExperimentResult first = run_subspace_entropy(config);
  const ExperimentResult second = run_subspace_entropy(config);

  CHECK(first.summary.dump() == second.summary.dump());
  CHECK(nlohmann::json(first.records).dump() == nlohmann::json(second.records).dump());

  REQUIRE(first.records.size() == 3);
  const double global_min = first.summary.at("min_entropy").get<double>();
  double smallest = 1e9;
  for (const auto& record : first.records) {
    const double local_min = record.at("min_entropy").get<double>();
    const double local_mean = record.at("mean_entropy").get<double>();
    CHECK(local_min >= -1e-12);
    CHECK(local_mean >= local_min - 1e-12);
    CHECK(local_mean <= 1.0 + 1e-9);
    smallest = std::min(smallest, local_min);
  }
  CHECK(global_min == doctest::Approx(smallest).epsilon(1e-12));
  CHECK(first.summary.at("states_per_subspace").get<int>() == 25);
  CHECK(first.summary.at("predicted").get<double>() ==
        doctest::Approx(1.0 - kHalfInvLn2).epsilon(1e-12));
}

TEST_CASE("relative entropy sweeps keep the three bounds in sandwich order") {
  const ExperimentConfig config = make_config("er-typical", 2, 2, 0, 3, 17);
  const ExperimentResult result = run_er_typical(config);

  REQUIRE(result.records.size() == 3);
  CHECK(result.summary.at("sandwich_violations").get<int>() == 0);
  for (const auto& record : result.records) {
    CHECK(record.at("sandwich_ok").get<bool>());
    const double lower = record.at("er_lower").get<double>();
    const double fw = record.at("fw_upper").get<double>();
    const double trivial = record.at("trivial_upper").get<double>();
    CHECK(lower <= fw + 1e-6);
    CHECK(fw <= trivial + 1e-6);
    CHECK(lower >= -1e-12);
  }
  CHECK(result.summary.at("median_lower").get<double>() <=
        result.summary.at("median_trivial_upper").get<double>() + 1e-6);
  CHECK(result.summary.contains("predicted"));
  CHECK(result.summary.contains("bracket_ok"));
}

TEST_CASE("formation sweeps on pure inputs collapse every upper onto the entropy") {
  const ExperimentConfig config = make_config("ef-typical", 2, 1, 50, 4, 29);
  const ExperimentResult result = run_ef_typical(config);

  REQUIRE(result.records.size() == 4);
  CHECK(result.summary.at("cap_violations").get<int>() == 0);
  for (const auto& record : result.records) {
    CHECK(record.at("rank").get<int>() == 1);
    const double eigen_avg = record.at("eigen_avg_upper").get<double>();
    const double min_support = record.at("min_support_entropy").get<double>();
    const double mean_support = record.at("mean_support_entropy").get<double>();

    // A rank one support contains a single state up to phase.
    CHECK(std::abs(min_support - eigen_avg) < 1e-9);
    CHECK(std::abs(mean_support - eigen_avg) < 1e-9);

    REQUIRE(record.contains("roof_upper"));
    const double roof = record.at("roof_upper").get<double>();
    CHECK(roof >= eigen_avg - 1e-6);
    CHECK(std::abs(roof - eigen_avg) < 1e-3);
  }
  CHECK(std::abs(result.summary.at("median_roof_upper").get<double>() -
                 result.summary.at("median_min_support_entropy").get<double>()) < 1e-3);
}

TEST_CASE("tangle scans over pure tripartite states never certify a violation") {
  ExperimentConfig config = make_config("nonmono-scan", 2, 1, 0, 6, 47);
  config.estimator = "tangle";
  const ExperimentResult result = run_nonmono_scan(config);

  CHECK(result.summary.at("certified_violations").get<int>() == 0);
  CHECK(result.summary.at("certified_satisfactions").get<int>() == 6);
  CHECK(result.summary.at("failures").get<int>() == 0);
  CHECK(result.summary.at("slack_min").get<double>() >= -1e-8);
  CHECK(result.summary.at("estimator") == "tangle");
  CHECK(result.summary.at("f").is_object());

  REQUIRE(result.records.size() == 6);
  for (const auto& record : result.records) {
    CHECK(record.at("verdict") == "certified-satisfaction");
    CHECK(record.at("abc_lower").get<double>() <= record.at("abc_upper").get<double>() + 1e-12);
  }
}

TEST_CASE("the increasing-dimension construction sweeps three local dimensions") {
  const ExperimentConfig config = make_config("result1", 0, 0, 0, 2, 53);
  const ExperimentResult result = run_result1_construction(config);

  const auto& per_d = result.summary.at("per_d");
  REQUIRE(per_d.size() == 3);
  const int expected_d[3] = {2, 4, 8};
  for (size_t i = 0; i < 3; ++i) {
    CHECK(per_d[i].at("d").get<int>() == expected_d[i]);
    const double x = std::log2(static_cast<double>(expected_d[i]));
    CHECK(per_d[i].at("e_abc_upper").get<double>() == doctest::Approx(x).epsilon(1e-12));
    const double ratio = per_d[i].at("median_ratio_ab").get<double>();
    CHECK(ratio >= 0.0);
    CHECK(ratio <= 1.0 + 1e-9);
  }
  CHECK(result.summary.at("trend_ok").is_boolean());

  REQUIRE(result.records.size() == 6);
  for (const auto& record : result.records) {
    const double x = std::log2(record.at("d").get<double>());
    CHECK(record.at("e_abc_upper").get<double>() == doctest::Approx(x).epsilon(1e-12));
    const double ef_ab = record.at("ef_upper_ab").get<double>();
    CHECK(ef_ab >= -1e-12);
    CHECK(ef_ab <= x + 1e-9);
    CHECK(record.at("ratio_ab").get<double>() == doctest::Approx(ef_ab / x).epsilon(1e-12));
  }
}

TEST_CASE("the dispatcher routes by kind and rejects what validation rejects") {
  const ExperimentResult paged =
      run_experiment(make_config("page-entropy", 0, 1, 4, 2, 3));
  CHECK(paged.summary.at("kind") == "page-entropy");

  ExperimentConfig bad = make_config("page-entropy", 0, 1, 4, 2, 3);
  bad.kind = "mystery";
  CHECK_THROWS_AS(run_experiment(bad), std::invalid_argument);
}

TEST_CASE("csv export takes the sorted key union and escapes awkward cells") {
  std::vector<nlohmann::json> records;
  records.push_back({{"trial", 0}, {"note", "a,b"}});
  records.push_back({{"trial", 1}, {"value", 0.5}});
  const std::string csv = records_to_csv(records);
  CHECK(csv == "note,trial,value\n\"a,b\",0,\n,1,0.5\n");

  std::vector<nlohmann::json> quoted;
  quoted.push_back({{"q", "say \"hi\""}});
  CHECK(records_to_csv(quoted) == "q\n\"say \"\"hi\"\"\"\n");

  CHECK(records_to_csv({}) == "\n");
}

TEST_CASE("experiment runs are reproducible through the dispatcher") {
  ExperimentConfig config = make_config("overlap", 0, 4, 8, 10, 77);
  const ExperimentResult a = run_experiment(config);
  const ExperimentResult b = run_experiment(config);
  CHECK(a.summary.dump() == b.summary.dump());
  CHECK(nlohmann::json(a.records).dump() == nlohmann::json(b.records).dump());
}
