#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "entbound/measures.hpp"
#include "entbound/qstate.hpp"
#include "entbound/random.hpp"

namespace entbound {

enum class ConstraintId { max, sum, quadrature, dim_ef, dim_er, custom };

std::string to_string(ConstraintId id);
ConstraintId constraint_from_string(const std::string& name);

// A monogamy constraint function f(x, y) with f(x, y) >= max(x, y),
// entering the relation E_{A:BC} >= f(E_{A:B}, E_{A:C}).
struct ConstraintFunction {
  ConstraintId id = ConstraintId::sum;
  std::map<std::string, double> params;  // c, d_a, d_b, d_c for the dimension-dependent forms
  std::function<double(double, double)> custom_fn;
  bool custom_monotone = false;

  // Monotone nondecreasing in both arguments on x, y >= 0; required
  // for certified verdicts.
  bool monotone() const;
  std::string name() const;
  nlohmann::json describe() const;

  static ConstraintFunction make(ConstraintId id,
                                 const std::map<std::string, double>& params = {});
};

double evaluate_f(const ConstraintFunction& f, double x, double y);

// True iff f(x, y) > max(x, y) strictly at every grid point of
// [lo, hi]^2 with the given step (positive pairs only).
bool strictness_check(const ConstraintFunction& f, double lo = 0.1, double hi = 10.0,
                      double step = 0.1);

// True iff f(x, y) >= max(x, y) at every grid point of [0, 10]^2 with
// step 0.1 (up to 1e-12 slack).
bool admissibility_check(const ConstraintFunction& f);

enum class Verdict { certified_violation, certified_satisfaction, inconclusive };

std::string to_string(Verdict v);

// Applies the verdict rule to three bound sets. Violation requires
// f(lower(ab), lower(ac)) to exceed upper(abc); satisfaction requires
// lower(abc) to reach f(upper(ab), upper(ac)); both use certified
// bounds only, so heuristic estimates can never flip a verdict.
Verdict decide_verdict(const BoundSet& abc, const BoundSet& ab, const BoundSet& ac,
                       const ConstraintFunction& f);

struct MonogamyReport {
  BoundSet abc;
  BoundSet ab;
  BoundSet ac;
  nlohmann::json f;        // constraint description
  double slack = 0.0;      // primary(abc) - f(primary(ab), primary(ac))
  Verdict verdict = Verdict::inconclusive;
  std::string diagnostic;  // populated when an estimator failed
  nlohmann::json provenance;
};

nlohmann::json to_json(const MonogamyReport& report);

// Evaluates the measure on the A:BC, A:B, and A:C cuts of a
// tripartite state and issues a certified verdict on
// E_{A:BC} >= f(E_{A:B}, E_{A:C}). Certified verdicts use only sound
// bound directions; estimator failures yield an inconclusive report
// with a diagnostic.
MonogamyReport audit(const MultipartiteState& rho, const CutSpec& cut, EstimatorId measure,
                     const ConstraintFunction& f, const EstimatorOptions& options = {},
                     const nlohmann::json& provenance = {});

// Audits `trials` random tripartite induced states (dims [d,d,d],
// environment s) against f, with per-trial derived seed streams.
std::vector<MonogamyReport> nonmonogamy_scan(int d, int s, int trials, EstimatorId measure,
                                             const SeededSampler& sampler,
                                             const ConstraintFunction& f =
                                                 ConstraintFunction::make(ConstraintId::sum),
                                             const EstimatorOptions& options = {});

}  // namespace entbound
