#include "entbound/monogamy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace entbound {

namespace {

constexpr double kVerdictTol = 1e-7;

double require_param(const ConstraintFunction& f, const std::string& key) {
  const auto it = f.params.find(key);
  if (it == f.params.end()) {
    throw std::invalid_argument("constraint '" + f.name() + "' is missing parameter '" + key +
                                "'");
  }
  return it->second;
}

double dimension_term(double value, double c, double d_first, double d_second, double power) {
  const double d_min = std::min(d_first, d_second);
  if (d_min < 2.0) {
    throw std::invalid_argument("dimension-dependent constraints need dimensions >= 2");
  }
  const double log_min = std::log2(d_min);
  return c * std::pow(value, power) / (d_first * d_second * std::pow(log_min, power));
}

}  // namespace

std::string to_string(ConstraintId id) {
  switch (id) {
    case ConstraintId::max: return "max";
    case ConstraintId::sum: return "sum";
    case ConstraintId::quadrature: return "quadrature";
    case ConstraintId::dim_ef: return "dimEF";
    case ConstraintId::dim_er: return "dimER";
    case ConstraintId::custom: return "custom";
  }
  return "unknown";
}

ConstraintId constraint_from_string(const std::string& name) {
  if (name == "max") return ConstraintId::max;
  if (name == "sum") return ConstraintId::sum;
  if (name == "quadrature") return ConstraintId::quadrature;
  if (name == "dimEF" || name == "dimension-dependent-EF") return ConstraintId::dim_ef;
  if (name == "dimER" || name == "dimension-dependent-ER") return ConstraintId::dim_er;
  if (name == "custom") return ConstraintId::custom;
  throw std::invalid_argument("unknown constraint function: " + name);
}

bool ConstraintFunction::monotone() const {
  // Built-in constraints are nondecreasing in both arguments on the
  // nonnegative quadrant; custom functions must declare it.
  return id == ConstraintId::custom ? custom_monotone : true;
}

std::string ConstraintFunction::name() const { return to_string(id); }

nlohmann::json ConstraintFunction::describe() const {
  nlohmann::json out{{"id", name()}, {"monotone", monotone()}};
  if (!params.empty()) out["params"] = params;
  if (id == ConstraintId::dim_ef || id == ConstraintId::dim_er) {
    out["disclaimer"] =
        "the universal constant is caller-supplied (default 1); no ground-truth value exists";
  }
  return out;
}

ConstraintFunction ConstraintFunction::make(ConstraintId id,
                                            const std::map<std::string, double>& params) {
  ConstraintFunction f;
  f.id = id;
  f.params = params;
  return f;
}

double evaluate_f(const ConstraintFunction& f, double x, double y) {
  if (x < 0.0 || y < 0.0) throw std::invalid_argument("constraint arguments must be nonnegative");
  switch (f.id) {
    case ConstraintId::max:
      return std::max(x, y);
    case ConstraintId::sum:
      return x + y;
    case ConstraintId::quadrature:
      return std::sqrt(x * x + y * y);
    case ConstraintId::dim_ef: {
      const double c = require_param(f, "c");
      const double d_a = require_param(f, "d_a");
      const double d_b = require_param(f, "d_b");
      const double d_c = require_param(f, "d_c");
      return std::max(x + dimension_term(y, c, d_a, d_c, 8.0),
                      y + dimension_term(x, c, d_a, d_b, 8.0));
    }
    case ConstraintId::dim_er: {
      const double c = require_param(f, "c");
      const double d_a = require_param(f, "d_a");
      const double d_b = require_param(f, "d_b");
      const double d_c = require_param(f, "d_c");
      return std::max(x + dimension_term(y, c, d_a, d_c, 4.0),
                      y + dimension_term(x, c, d_a, d_b, 4.0));
    }
    case ConstraintId::custom:
      if (!f.custom_fn) throw std::invalid_argument("custom constraint has no function");
      return f.custom_fn(x, y);
  }
  throw std::invalid_argument("unhandled constraint id");
}

bool strictness_check(const ConstraintFunction& f, double lo, double hi, double step) {
  if (lo <= 0.0 || step <= 0.0 || hi < lo) {
    throw std::invalid_argument("strictness grid needs 0 < lo <= hi and step > 0");
  }
  for (double x = lo; x <= hi + 1e-12; x += step) {
    for (double y = lo; y <= hi + 1e-12; y += step) {
      if (evaluate_f(f, x, y) <= std::max(x, y)) return false;
    }
  }
  return true;
}

bool admissibility_check(const ConstraintFunction& f) {
  for (double x = 0.0; x <= 10.0 + 1e-12; x += 0.1) {
    for (double y = 0.0; y <= 10.0 + 1e-12; y += 0.1) {
      if (evaluate_f(f, x, y) < std::max(x, y) - 1e-12) return false;
    }
  }
  return true;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::certified_violation: return "certified-violation";
    case Verdict::certified_satisfaction: return "certified-satisfaction";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

nlohmann::json to_json(const MonogamyReport& report) {
  nlohmann::json out{{"e_abc", to_json(report.abc)},
                     {"e_ab", to_json(report.ab)},
                     {"e_ac", to_json(report.ac)},
                     {"f", report.f},
                     {"slack", report.slack},
                     {"verdict", to_string(report.verdict)},
                     {"provenance", report.provenance}};
  if (!report.diagnostic.empty()) out["diagnostic"] = report.diagnostic;
  return out;
}

namespace {

// Reduces a tripartite state to the parties of two sides and returns
// the reduced state together with the bipartite cut between those
// sides in the reduced index space.
std::pair<MultipartiteState, CutSpec> reduced_pair(const MultipartiteState& rho,
                                                   const std::vector<int>& first,
                                                   const std::vector<int>& second) {
  std::vector<int> keep = first;
  keep.insert(keep.end(), second.begin(), second.end());
  std::sort(keep.begin(), keep.end());
  const MultipartiteState reduced = partial_trace(rho, keep);

  auto position = [&](int party) {
    return static_cast<int>(std::lower_bound(keep.begin(), keep.end(), party) - keep.begin());
  };
  CutSpec cut;
  for (int p : first) cut.side_a.push_back(position(p));
  for (int p : second) cut.side_b.push_back(position(p));
  std::sort(cut.side_a.begin(), cut.side_a.end());
  std::sort(cut.side_b.begin(), cut.side_b.end());
  return {reduced, cut};
}

}  // namespace

MonogamyReport audit(const MultipartiteState& rho, const CutSpec& cut, EstimatorId measure,
                     const ConstraintFunction& f, const EstimatorOptions& options,
                     const nlohmann::json& provenance) {
  cut.validate(static_cast<int>(rho.dims.size()));
  if (!cut.tripartite()) throw std::invalid_argument("audit needs a tripartite cut");

  MonogamyReport report;
  report.f = f.describe();
  report.provenance = provenance.is_null() ? nlohmann::json::object() : provenance;
  report.provenance["measure"] = to_string(measure);
  report.provenance["cut"] = cut.str();
  if (!rho.label.empty()) report.provenance["state"] = rho.label;

  CutSpec abc_cut;
  abc_cut.side_a = cut.side_a;
  abc_cut.side_b = cut.side_b;
  abc_cut.side_b.insert(abc_cut.side_b.end(), cut.side_c.begin(), cut.side_c.end());
  std::sort(abc_cut.side_b.begin(), abc_cut.side_b.end());

  try {
    report.abc = estimate_measure(rho, abc_cut, measure, options);
    const auto [rho_ab, ab_cut] = reduced_pair(rho, cut.side_a, cut.side_b);
    report.ab = estimate_measure(rho_ab, ab_cut, measure, options);
    const auto [rho_ac, ac_cut] = reduced_pair(rho, cut.side_a, cut.side_c);
    report.ac = estimate_measure(rho_ac, ac_cut, measure, options);
  } catch (const std::exception& e) {
    report.verdict = Verdict::inconclusive;
    report.diagnostic = e.what();
    return report;
  }

  report.slack =
      report.abc.primary() - evaluate_f(f, report.ab.primary(), report.ac.primary());

  if (f.monotone()) {
    report.verdict = decide_verdict(report.abc, report.ab, report.ac, f);
  } else {
    report.verdict = Verdict::inconclusive;
    report.diagnostic = "constraint function is not declared monotone; no certified verdict";
  }
  return report;
}

Verdict decide_verdict(const BoundSet& abc, const BoundSet& ab, const BoundSet& ac,
                       const ConstraintFunction& f) {
  if (!f.monotone()) return Verdict::inconclusive;
  const double violation_gap =
      evaluate_f(f, ab.certified_lower(), ac.certified_lower()) - abc.certified_upper();
  const double satisfaction_gap =
      abc.certified_lower() - evaluate_f(f, ab.certified_upper(), ac.certified_upper());
  if (violation_gap > kVerdictTol) return Verdict::certified_violation;
  if (satisfaction_gap >= -kVerdictTol) return Verdict::certified_satisfaction;
  return Verdict::inconclusive;
}

std::vector<MonogamyReport> nonmonogamy_scan(int d, int s, int trials, EstimatorId measure,
                                             const SeededSampler& sampler,
                                             const ConstraintFunction& f,
                                             const EstimatorOptions& options) {
  if (trials < 1) throw std::invalid_argument("scan needs at least one trial");
  CutSpec cut = CutSpec::parse("0|1|2", 3);
  std::vector<MonogamyReport> reports;
  reports.reserve(static_cast<size_t>(trials));
  for (int trial = 0; trial < trials; ++trial) {
    SeededSampler trial_sampler = sampler.for_trial(static_cast<uint64_t>(trial));
    const MultipartiteState rho = random_tripartite_induced(d, s, trial_sampler);
    nlohmann::json provenance{{"kind", "tripartite-induced"},
                              {"d", d},
                              {"s", s},
                              {"seed", sampler.seed()},
                              {"trial", trial}};
    reports.push_back(audit(rho, cut, measure, f, options, provenance));
  }
  return reports;
}

}  // namespace entbound
