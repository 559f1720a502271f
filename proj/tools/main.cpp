#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "entbound/antisym.hpp"
#include "entbound/experiments.hpp"
#include "entbound/measures.hpp"
#include "entbound/monogamy.hpp"
#include "entbound/qstate.hpp"
#include "entbound/random.hpp"
#include "entbound/serialization.hpp"

namespace {

using entbound::Json;

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
}

void write_records_jsonl(const std::string& path, const std::vector<Json>& records) {
  std::string content;
  for (const auto& record : records) {
    content += record.dump();
    content += "\n";
  }
  write_text(path, content);
}

std::string replace_extension(const std::string& path, const std::string& ext) {
  const size_t slash = path.find_last_of('/');
  const size_t dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return path + ext;
  }
  return path.substr(0, dot) + ext;
}

entbound::ConstraintFunction make_constraint(const std::string& name, double c,
                                             const entbound::MultipartiteState& rho,
                                             const entbound::CutSpec& cut) {
  const entbound::ConstraintId id = entbound::constraint_from_string(name);
  std::map<std::string, double> params;
  if (id == entbound::ConstraintId::dim_ef || id == entbound::ConstraintId::dim_er) {
    params["c"] = c;
    params["d_a"] = static_cast<double>(entbound::side_dimension(cut.side_a, rho.dims));
    params["d_b"] = static_cast<double>(entbound::side_dimension(cut.side_b, rho.dims));
    params["d_c"] = static_cast<double>(entbound::side_dimension(cut.side_c, rho.dims));
  }
  return entbound::ConstraintFunction::make(id, params);
}

int run_sample(const std::string& kind, int d, int s, std::uint64_t seed,
               const std::string& out) {
  entbound::SeededSampler sampler(seed);
  Json record;
  if (kind == "haar") {
    record = entbound::to_json(entbound::haar_pure(d, sampler));
  } else if (kind == "induced") {
    record = entbound::to_json(entbound::induced_bipartite(d, s, sampler));
  } else if (kind == "tripartite") {
    record = entbound::to_json(entbound::random_tripartite_induced(d, s, sampler));
  } else if (kind == "subspace") {
    const std::vector<entbound::PureState> basis = entbound::random_subspace(d, s, sampler);
    Json vectors = Json::array();
    for (const auto& psi : basis) vectors.push_back(entbound::to_json(psi));
    record = Json{{"ambient", d}, {"dim", s}, {"basis", std::move(vectors)}};
  } else {
    throw std::invalid_argument("unknown sample kind: " + kind);
  }
  record["seed"] = seed;
  entbound::write_json_file(out, record);
  std::cout << "wrote " << kind << " sample (seed " << seed << ") to " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certified bounds on bipartite entanglement measures, random-state experiments, "
               "and monogamy audits"};
  app.require_subcommand(1);

  // --- sample ---
  auto* sample = app.add_subcommand("sample", "draw a random state or subspace");
  std::string sample_kind;
  int sample_d = 2, sample_s = 1;
  std::uint64_t sample_seed = 1;
  std::string sample_out = "state.json";
  sample->add_option("--kind", sample_kind, "haar | induced | tripartite | subspace")
      ->required()
      ->check(CLI::IsMember({"haar", "induced", "tripartite", "subspace"}));
  sample->add_option("--d", sample_d, "local dimension (ambient dimension for subspace)");
  sample->add_option("--s", sample_s, "environment dimension (subspace dimension for subspace)");
  sample->add_option("--seed", sample_seed, "sampler seed");
  sample->add_option("--out", sample_out, "output JSON path")->required();

  // --- measure ---
  auto* measure = app.add_subcommand("measure", "estimate an entanglement measure with bounds");
  std::string measure_in, measure_cut = "0|1", measure_name = "er-bounds",
              measure_out = "result.json";
  int measure_restarts = 32;
  std::uint64_t measure_seed = 3;
  bool measure_witness = false;
  measure->add_option("--in", measure_in, "input state JSON")->required();
  measure->add_option("--cut", measure_cut, "bipartite cut, e.g. \"0|1\"");
  measure->add_option("--measure", measure_name,
                      "ee | ef2 | ef-roof | er-fw | er-bounds | ef | er | tangle");
  measure->add_option("--restarts", measure_restarts, "optimizer restarts");
  measure->add_option("--seed", measure_seed, "optimizer seed");
  measure->add_flag("--witness", measure_witness, "embed decomposition witnesses in the output");
  measure->add_option("--out", measure_out, "output JSON path");

  // --- audit ---
  auto* audit_cmd = app.add_subcommand("audit", "audit a generalized monogamy relation");
  std::string audit_in, audit_cut = "0|1|2", audit_measure = "tangle", audit_f = "sum",
              audit_out = "report.json";
  double audit_c = 1.0;
  std::uint64_t audit_seed = 3;
  audit_cmd->add_option("--in", audit_in, "input state JSON")->required();
  audit_cmd->add_option("--cut", audit_cut, "tripartite cut, e.g. \"0|1|2\"");
  audit_cmd->add_option("--measure", audit_measure, "measure estimator handle");
  audit_cmd->add_option("--f", audit_f, "sum | quadrature | max | dimEF | dimER")
      ->check(CLI::IsMember({"sum", "quadrature", "max", "dimEF", "dimER"}));
  audit_cmd->add_option("--c", audit_c, "constant for the dimension-dependent forms");
  audit_cmd->add_option("--seed", audit_seed, "estimator seed");
  audit_cmd->add_option("--out", audit_out, "output JSON path");

  // --- scan ---
  auto* scan = app.add_subcommand("scan", "audit random tripartite induced states");
  int scan_d = 2, scan_s = 1, scan_trials = 10;
  std::string scan_measure = "ef", scan_f = "sum", scan_out = "reports.jsonl";
  std::uint64_t scan_seed = 1;
  scan->add_option("--d", scan_d, "local dimension");
  scan->add_option("--s", scan_s, "environment dimension");
  scan->add_option("--trials", scan_trials, "number of sampled states");
  scan->add_option("--measure", scan_measure, "measure estimator handle");
  scan->add_option("--f", scan_f, "constraint function")
      ->check(CLI::IsMember({"sum", "quadrature", "max"}));
  scan->add_option("--seed", scan_seed, "sampler seed");
  scan->add_option("--out", scan_out, "output JSONL path");

  // --- antisym-chain ---
  auto* chain = app.add_subcommand("antisym-chain", "evaluate the antisymmetric chain g_k");
  int chain_d = 3, chain_max_k = 1;
  std::string chain_estimator = "ee", chain_out = "chain.json";
  double chain_c = 1.0, chain_t = 1.0;
  std::uint64_t chain_seed = 3;
  chain->add_option("--d", chain_d, "local dimension");
  chain->add_option("--max-k", chain_max_k, "largest chain index to attempt");
  chain->add_option("--estimator", chain_estimator, "ee | ef-roof | er-fw")
      ->check(CLI::IsMember({"ee", "ef-roof", "er-fw"}));
  chain->add_option("--pigeonhole-c", chain_c, "constant c in the ratio threshold");
  chain->add_option("--pigeonhole-t", chain_t, "exponent t in the ratio threshold");
  chain->add_option("--seed", chain_seed, "estimator seed");
  chain->add_option("--out", chain_out, "output JSON path");

  // --- experiment ---
  auto* experiment = app.add_subcommand("experiment", "run a Monte Carlo experiment");
  std::string exp_config, exp_out = "summary.json", exp_records;
  bool exp_csv = false;
  experiment->add_option("--config", exp_config, "experiment config JSON")->required();
  experiment->add_option("--out", exp_out, "summary JSON path");
  experiment->add_option("--records", exp_records, "per-trial records JSONL path");
  experiment->add_flag("--csv", exp_csv,
                       "also write the records as CSV (next to the records path)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sample->parsed()) {
      return run_sample(sample_kind, sample_d, sample_s, sample_seed, sample_out);
    }

    if (measure->parsed()) {
      const entbound::MultipartiteState rho = entbound::load_state(measure_in);
      const entbound::CutSpec cut =
          entbound::CutSpec::parse(measure_cut, static_cast<int>(rho.dims.size()));
      entbound::EstimatorOptions options;
      options.overlap_restarts = measure_restarts;
      options.roof.restarts = measure_restarts;
      options.seed = measure_seed;
      const entbound::BoundSet bounds =
          entbound::estimate_measure(rho, cut, entbound::estimator_from_string(measure_name),
                                     options);
      Json out{{"state", rho.label},
               {"dims", rho.dims},
               {"cut", cut.str()},
               {"measure", measure_name},
               {"restarts", measure_restarts},
               {"seed", measure_seed},
               {"bounds", entbound::to_json(bounds, measure_witness)}};
      entbound::write_json_file(measure_out, out);
      std::cout << measure_name << " on cut " << cut.str() << ": primary " << bounds.primary()
                << ", certified [" << bounds.certified_lower() << ", "
                << bounds.certified_upper() << "]\n";
      return 0;
    }

    if (audit_cmd->parsed()) {
      const entbound::MultipartiteState rho = entbound::load_state(audit_in);
      const entbound::CutSpec cut =
          entbound::CutSpec::parse(audit_cut, static_cast<int>(rho.dims.size()));
      entbound::EstimatorOptions options;
      options.seed = audit_seed;
      const entbound::ConstraintFunction f = make_constraint(audit_f, audit_c, rho, cut);
      const entbound::MonogamyReport report =
          entbound::audit(rho, cut, entbound::estimator_from_string(audit_measure), f, options,
                          Json{{"input", audit_in}, {"seed", audit_seed}});
      entbound::write_json_file(audit_out, entbound::to_json(report));
      std::cout << "verdict: " << entbound::to_string(report.verdict) << ", slack "
                << report.slack << "\n";
      return 0;
    }

    if (scan->parsed()) {
      entbound::SeededSampler sampler(scan_seed);
      entbound::EstimatorOptions options;
      options.overlap_restarts = 16;
      options.roof.restarts = 8;
      options.roof.max_iters = 80;
      options.seed = scan_seed;
      const std::vector<entbound::MonogamyReport> reports = entbound::nonmonogamy_scan(
          scan_d, scan_s, scan_trials, entbound::estimator_from_string(scan_measure), sampler,
          entbound::ConstraintFunction::make(entbound::constraint_from_string(scan_f)), options);
      std::vector<Json> lines;
      int violations = 0;
      for (const auto& report : reports) {
        if (report.verdict == entbound::Verdict::certified_violation) ++violations;
        lines.push_back(entbound::to_json(report));
      }
      write_records_jsonl(scan_out, lines);
      std::cout << reports.size() << " audits written to " << scan_out << " ("
                << violations << " certified violations)\n";
      return 0;
    }

    if (chain->parsed()) {
      entbound::EstimatorOptions options;
      options.seed = chain_seed;
      const std::vector<entbound::ChainRecord> records = entbound::chain_sequence(
          chain_d, chain_max_k, entbound::estimator_from_string(chain_estimator), options);
      Json out = entbound::chain_to_json(records);
      out["estimator"] = chain_estimator;
      out["d"] = chain_d;
      Json pigeonhole{{"c", chain_c}, {"t", chain_t}};
      if (records.size() >= 2) {
        pigeonhole["threshold"] = entbound::pigeonhole_threshold(
            static_cast<int>(records.size()) - 1, chain_c, chain_t);
        const std::optional<int> index = entbound::pigeonhole_index(records, chain_c, chain_t);
        if (index) {
          pigeonhole["index"] = *index;
        } else {
          pigeonhole["index"] = "inconclusive";
        }
      } else {
        pigeonhole["index"] = "needs at least two records";
      }
      out["pigeonhole"] = std::move(pigeonhole);
      entbound::write_json_file(chain_out, out);
      std::cout << records.size() << " chain records written to " << chain_out << "\n";
      return 0;
    }

    if (experiment->parsed()) {
      const entbound::ExperimentConfig config =
          entbound::ExperimentConfig::from_json(entbound::read_json_file(exp_config));
      const entbound::ExperimentResult result = entbound::run_experiment(config);
      entbound::write_json_file(exp_out, result.summary);
      if (!exp_records.empty()) {
        write_records_jsonl(exp_records, result.records);
      }
      if (exp_csv) {
        const std::string base = exp_records.empty() ? exp_out : exp_records;
        write_text(replace_extension(base, ".csv"), entbound::records_to_csv(result.records));
      }
      std::cout << config.kind << ": " << result.records.size() << " records, summary in "
                << exp_out << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
