// Command-line front end: `run` executes experiment suites and writes reports;
// `inspect` validates serialized objects and prints their statistics.
// Exit codes: 0 success, 1 invariant or semantic validation failure, 2 usage
// or parse error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "operon/experiments.hpp"
#include "operon/serialize.hpp"

namespace {

using namespace operon;

// Reconstruction slack for stored certificates: fresh ones satisfy 1e-7, and
// the JSON round trip preserves doubles exactly, so 1e-6 leaves safe margin.
constexpr double kInspectCertificateSlack = 1e-6;

Dims parse_dims(const std::string& text) {
  const auto split = text.find('x');
  if (split == std::string::npos || split == 0 || split + 1 >= text.size()) {
    throw CLI::ValidationError("--dims", "expected the form <dimA>x<dimB>, e.g. 2x2");
  }
  Dims dims;
  try {
    dims.a = std::stoi(text.substr(0, split));
    dims.b = std::stoi(text.substr(split + 1));
  } catch (const std::exception&) {
    throw CLI::ValidationError("--dims", "dimensions must be integers");
  }
  if (dims.a <= 0 || dims.b <= 0) {
    throw CLI::ValidationError("--dims", "dimensions must be positive");
  }
  return dims;
}

int run_command(const std::string& suite, const std::string& dims_text, std::uint64_t seed,
                std::optional<int> trials, const std::string& out_path,
                const std::string& format, bool stable) {
  const Dims dims = parse_dims(dims_text);

  const std::vector<ExperimentEntry>& registry = experiment_registry();
  if (suite != "all") {
    bool known = false;
    for (const ExperimentEntry& entry : registry) known = known || entry.name == suite;
    if (!known) {
      std::cerr << "unknown suite \"" << suite << "\"; available:";
      for (const ExperimentEntry& entry : registry) std::cerr << " " << entry.name;
      std::cerr << " all" << std::endl;
      return 2;
    }
  }

  RunReport report;
  report.seed = seed;
  report.dims = dims;
  report.trials_override = trials;
  for (const ExperimentEntry& entry : registry) {
    if (suite != "all" && entry.name != suite) continue;
    if (const std::optional<std::string> reason = entry.obstruction(dims)) {
      report.refused.emplace_back(entry.name, *reason);
      continue;
    }
    try {
      report.experiments.push_back(
          entry.run(seed, dims, trials.value_or(entry.default_trials)));
    } catch (const ExperimentRefused& refused) {
      report.refused.emplace_back(entry.name, refused.what());
    }
  }

  std::string rendered;
  if (format == "json") {
    rendered = report_to_json(report, stable);
  } else if (format == "text") {
    rendered = report_to_text(report, stable);
  } else if (format == "csv") {
    rendered = report_to_csv(report);
  } else {
    std::cerr << "unknown format \"" << format << "\" (expected json, text or csv)"
              << std::endl;
    return 2;
  }

  if (out_path.empty()) {
    std::cout << rendered;
  } else {
    write_text_file(out_path, rendered);
  }
  return report.all_pass() ? 0 : 1;
}

void print_state_stats(const SerializedState& loaded) {
  const StateFunctional& rho = loaded.state;
  const HermitianEigenSystem eig = hermitian_eig(rho.density());
  std::cout << "kind: state" << std::endl;
  std::cout << "dim: " << rho.dim() << std::endl;
  if (!rho.label().empty()) std::cout << "label: " << rho.label() << std::endl;
  std::cout << "trace: " << rho.density().trace().real() << std::endl;
  std::cout << "min_eigenvalue: " << eig.eigenvalues(0) << std::endl;
  std::cout << "purity: " << (rho.density() * rho.density()).trace().real() << std::endl;
  std::cout << "rank: " << numerical_rank(rho.density()) << std::endl;
  if (loaded.dims) {
    const Dims dims = *loaded.dims;
    std::cout << "dims: " << dims.a << "x" << dims.b << std::endl;
    const HermitianEigenSystem pt =
        hermitian_eig(partial_transpose(rho.density(), dims, Factor::B));
    std::cout << "min_partial_transpose_eigenvalue: " << pt.eigenvalues(0) << std::endl;
  }
}

void print_operation_stats(const KrausOperation& op) {
  std::cout << "kind: operation" << std::endl;
  std::cout << "ambient_dim: " << op.dim() << std::endl;
  if (!op.label().empty()) std::cout << "label: " << op.label() << std::endl;
  std::cout << "kraus_count: " << op.kraus().size() << std::endl;
  const ComplexMatrix id = ComplexMatrix::Identity(op.dim(), op.dim());
  std::cout << "completeness_defect: " << (op.completeness_sum() - id).norm() << std::endl;
  std::cout << "nonselective: " << (op.nonselective() ? "yes" : "no") << std::endl;
}

void print_algebra_stats(const OperatorAlgebra& r) {
  std::cout << "kind: algebra" << std::endl;
  std::cout << "ambient_dim: " << r.ambient_dim << std::endl;
  std::cout << "generators: " << r.generators.size() << std::endl;
  std::cout << "span_dimension: " << r.dimension() << std::endl;
  std::cout << "abelian: " << (is_abelian(r) ? "yes" : "no") << std::endl;
  const CenterDecomposition center = center_and_factor(r);
  std::cout << "factor: " << (center.is_factor ? "yes" : "no") << std::endl;
  std::cout << "center_dimension: " << center.center.dimension() << std::endl;
}

// Returns false on a semantic inconsistency (certificate fails to certify).
bool print_verdict_stats(const SerializedVerdict& loaded) {
  const SeparabilityVerdict& verdict = loaded.verdict;
  std::cout << "kind: verdict" << std::endl;
  std::cout << "status: "
            << (verdict.status == Separability::separable    ? "separable"
                : verdict.status == Separability::entangled ? "entangled"
                                                             : "inconclusive")
            << std::endl;
  std::cout << "method: " << verdict.method << std::endl;
  std::cout << "dims: " << verdict.dims.a << "x" << verdict.dims.b << std::endl;
  bool consistent = true;
  if (verdict.certificate) {
    const double residual =
        verdict.certificate->reconstruction_residual(loaded.state.density());
    std::cout << "certificate_terms: " << verdict.certificate->terms() << std::endl;
    std::cout << "certificate_residual: " << residual << std::endl;
    if (residual > kInspectCertificateSlack) {
      std::cerr << "semantic failure: certificate does not reconstruct the stored state"
                << std::endl;
      consistent = false;
    }
  }
  if (verdict.pair_certificate) {
    std::cout << "pair_certificate_terms: " << verdict.pair_certificate->weights.size()
              << std::endl;
    std::cout << "pair_agreement_residual: " << verdict.pair_certificate->agreement_residual
              << std::endl;
  }
  if (verdict.witness) {
    std::cout << "witness_min_pt_eigenvalue: " << verdict.witness->min_pt_eigenvalue
              << std::endl;
    const HermitianEigenSystem pt =
        hermitian_eig(partial_transpose(loaded.state.density(), verdict.dims, Factor::B));
    const double recomputed = pt.eigenvalues(0);
    std::cout << "witness_recomputed: " << recomputed << std::endl;
    if (std::abs(recomputed - verdict.witness->min_pt_eigenvalue) > 1e-8) {
      std::cerr << "semantic failure: stored witness eigenvalue disagrees with the state"
                << std::endl;
      consistent = false;
    }
  }
  if (verdict.best_distance) {
    std::cout << "best_distance: " << *verdict.best_distance << std::endl;
  }
  return consistent;
}

void print_report_stats(const nlohmann::json& j) {
  std::cout << "kind: report" << std::endl;
  std::cout << "seed: " << j.at("seed").get<std::uint64_t>() << std::endl;
  const auto& dims = j.at("dims");
  std::cout << "dims: " << dims.at(0).get<int>() << "x" << dims.at(1).get<int>() << std::endl;
  int invariants = 0, failures = 0;
  for (const auto& experiment : j.at("experiments")) {
    for (const auto& inv : experiment.at("invariants")) {
      ++invariants;
      if (!inv.at("pass").get<bool>()) ++failures;
    }
  }
  std::cout << "experiments: " << j.at("experiments").size() << std::endl;
  std::cout << "refused: " << j.at("refused").size() << std::endl;
  std::cout << "invariants: " << invariants << std::endl;
  std::cout << "failed_invariants: " << failures << std::endl;
  std::cout << "all_pass: " << (j.at("all_pass").get<bool>() ? "yes" : "no") << std::endl;
}

int inspect_command(const std::string& path) {
  const std::string text = read_text_file(path);
  nlohmann::json probe = nlohmann::json::parse(text, nullptr, false);
  if (probe.is_discarded() || !probe.is_object()) {
    throw SerializationError("malformed JSON", "");
  }
  if (probe.contains("kraus")) {
    print_operation_stats(operation_from_json(text));
    return 0;
  }
  if (probe.contains("generators")) {
    print_algebra_stats(algebra_from_json(text));
    return 0;
  }
  if (probe.contains("status")) {
    return print_verdict_stats(verdict_from_json(text)) ? 0 : 1;
  }
  if (probe.contains("experiments")) {
    try {
      print_report_stats(probe);
    } catch (const nlohmann::json::exception& e) {
      throw SerializationError(std::string("report shape: ") + e.what(), "");
    }
    return 0;
  }
  if (probe.contains("density")) {
    print_state_stats(state_from_json(text));
    return 0;
  }
  throw SerializationError(
      "unrecognized file: expected a state, operation, algebra, verdict or report", "");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"operator-algebra laboratory"};
  app.require_subcommand(1);

  std::string suite = "all";
  std::string dims_text = "2x2";
  std::uint64_t seed = 0;
  std::optional<int> trials;
  std::string out_path;
  std::string format = "json";
  bool stable = false;

  CLI::App* run = app.add_subcommand("run", "run experiment suites and emit a report");
  run->add_option("--suite", suite, "experiment name or \"all\"")->capture_default_str();
  run->add_option("--dims", dims_text, "bipartite dimensions <dimA>x<dimB>")
      ->capture_default_str();
  run->add_option("--seed", seed, "random seed")->capture_default_str();
  run->add_option("--trials", trials, "override per-experiment trial counts");
  run->add_option("--out", out_path, "output path (default: stdout)");
  run->add_option("--format", format, "json, text or csv")->capture_default_str();
  run->add_flag("--stable-output", stable,
                "omit wall-clock timing so equal configurations serialize identically");

  std::string inspect_path;
  CLI::App* inspect = app.add_subcommand("inspect", "validate a serialized file");
  inspect->add_option("path", inspect_path, "JSON file to inspect")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (run->parsed()) {
      return run_command(suite, dims_text, seed, trials, out_path, format, stable);
    }
    return inspect_command(inspect_path);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << std::endl;
    return 2;
  } catch (const SerializationError& e) {
    std::cerr << "parse error: " << e.what() << std::endl;
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << std::endl;
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
}
