#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "operon/entanglement.hpp"

namespace operon {

// Thrown when an experiment's dimension preconditions cannot hold (the
// refusal is the correct behavior, not a failure).
class ExperimentRefused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InvariantResult {
  std::string name;
  bool pass = false;
  double worst_residual = 0;  // worst value over all trials (units per invariant)
};

struct ExperimentReport {
  std::string name;
  std::uint64_t seed = 0;
  Dims dims;
  int trials = 0;
  std::vector<InvariantResult> invariants;
  std::vector<std::string> notes;  // documentation lines, no pass/fail meaning
  double wall_clock_seconds = 0;

  bool all_pass() const;
  const InvariantResult* find(const std::string& invariant_name) const;
};

struct IntertwinerSolution {
  ComplexMatrix a;      // factor operator, zero on the unreachable complement
  double residual = 0;  // ||(A (x) I) x - y|| (or mirrored for Factor::B)
};

// Least-squares factor operator mapping x toward y: solved in the Schmidt
// basis of x, exact (residual ~0) whenever the Schmidt rank of x equals the
// dimension of the untouched factor.
IntertwinerSolution solve_local_intertwiner(const ComplexVector& x, const ComplexVector& y,
                                            Dims dims, Factor which = Factor::A);

// Haar vectors are generically cyclic: full Schmidt rank, cyclicity for the
// factor algebra, and exact intertwiners onto random targets. Requires
// dims.a >= dims.b.
ExperimentReport run_cyclic_approximation(std::uint64_t seed, Dims dims, int trials);

// Component-density bound: for separating x and a random vector target, the
// commutant-side intertwiner realizes the target as a component of the state
// of x with density lambda = |Bx|^2 / ||B||_op^2, leaving a positive remainder.
// Requires square dims.
ExperimentReport run_component_density(std::uint64_t seed, Dims dims, int trials);

// Singular-value flooring restores invertibility and cyclicity while moving
// the acted vector by at most the floor. Requires square dims.
ExperimentReport run_invertible_cyclicity(std::uint64_t seed, Dims dims, int trials);

// Local operations on certified separable states never create entanglement:
// transported certificates reconstruct every update; a nonlocal control
// (CNOT) does create it.
ExperimentReport run_no_creation(std::uint64_t seed, Dims dims, int trials);

// Haar-random bipartite vectors are generically entangled and cyclic for both
// factors; product vectors are the nongeneric contrast. Requires square dims.
ExperimentReport run_generic_entanglement(std::uint64_t seed, Dims dims, int trials);

// Abelian (classical) subsystems never entangle: point-mass certificates for
// every state; the full/full contrast stays entangled. Fixed internal seed
// and trial count, so the report depends only on dims.
ExperimentReport run_abelian_classical(Dims dims);

// The replace channel prepares any target on factor A, mapping every input to
// a product state; notes document the structural contrast with mechanisms
// that would avoid product outputs (none exist at finite dimension).
ExperimentReport run_preparation_contrast(std::uint64_t seed, Dims dims, int trials);

struct ExperimentEntry {
  std::string name;
  int default_trials = 0;
  // Reason the experiment cannot run at these dims, or nullopt if it can.
  std::function<std::optional<std::string>(Dims)> obstruction;
  std::function<ExperimentReport(std::uint64_t seed, Dims dims, int trials)> run;
};

const std::vector<ExperimentEntry>& experiment_registry();

// Max worker threads: OPERON_THREADS if set (minimum 1), else hardware count.
int max_threads();

}  // namespace operon
