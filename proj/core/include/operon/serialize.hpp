#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "operon/algebra.hpp"
#include "operon/entanglement.hpp"
#include "operon/experiments.hpp"
#include "operon/operations.hpp"
#include "operon/state_functional.hpp"

namespace operon {

// Parse or schema violation; `where` is a JSON-path-like locator ("density.data[3]").
class SerializationError : public std::runtime_error {
 public:
  SerializationError(const std::string& message, const std::string& where)
      : std::runtime_error(where.empty() ? message : message + " (at " + where + ")"),
        where_(where) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

// Matrices: {"rows": n, "cols": m, "data": [[re, im], ...]} row-major.
// Readers reject NaN/Inf entries and shape mismatches.
std::string matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const std::string& text);

// States: {"density": <matrix>, "dims": [dA, dB]?, "label": string?}.
struct SerializedState {
  StateFunctional state;
  std::optional<Dims> dims;
};
std::string state_to_json(const StateFunctional& rho, std::optional<Dims> dims = {});
SerializedState state_from_json(const std::string& text);

// Operations: {"ambient_dim": n, "kraus": [<matrix>, ...], "label": string?}.
std::string operation_to_json(const KrausOperation& t);
KrausOperation operation_from_json(const std::string& text);

// Algebras: {"ambient_dim": n, "generators": [<matrix>, ...]}; the basis is
// recomputed on load, never trusted from the file.
std::string algebra_to_json(const OperatorAlgebra& r);
OperatorAlgebra algebra_from_json(const std::string& text);

// Verdicts embed the certified density so certificates and witnesses can be
// re-verified independently of the producing run.
std::string verdict_to_json(const SeparabilityVerdict& verdict, const StateFunctional& rho);
struct SerializedVerdict {
  SeparabilityVerdict verdict;
  StateFunctional state;
};
SerializedVerdict verdict_from_json(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Aggregate of one CLI invocation.
struct RunReport {
  std::uint64_t seed = 0;
  Dims dims;
  std::optional<int> trials_override;
  std::vector<ExperimentReport> experiments;
  // Experiments skipped because their dimension preconditions cannot hold.
  std::vector<std::pair<std::string, std::string>> refused;  // (name, reason)

  bool all_pass() const;
};

// stable = true omits wall-clock timing, the only nondeterministic content,
// so equal (seed, config) runs serialize byte-identically.
std::string report_to_json(const RunReport& report, bool stable);
std::string report_to_text(const RunReport& report, bool stable);
std::string report_to_csv(const RunReport& report);

}  // namespace operon
