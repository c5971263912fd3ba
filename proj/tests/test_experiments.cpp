#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>

#include "operon/experiments.hpp"
#include "operon/rng.hpp"

using namespace operon;

namespace {

ComplexVector singlet() {
  ComplexVector x = ComplexVector::Zero(4);
  x(1) = 1.0 / std::sqrt(2.0);
  x(2) = -1.0 / std::sqrt(2.0);
  return x;
}

bool same_invariants(const ExperimentReport& a, const ExperimentReport& b) {
  if (a.invariants.size() != b.invariants.size()) return false;
  for (std::size_t i = 0; i < a.invariants.size(); ++i) {
    if (a.invariants[i].name != b.invariants[i].name) return false;
    if (a.invariants[i].pass != b.invariants[i].pass) return false;
    // Bitwise equality: determinism means identical doubles, not close ones.
    if (a.invariants[i].worst_residual != b.invariants[i].worst_residual) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("local intertwiners: frozen values and exactness at full rank") {
  const Dims dims{2, 2};

  // Product source |00>, orthogonal product target |11>: nothing on the B
  // side can be reached, so the best factor operator is zero and the whole
  // target is residual.
  ComplexVector x = ComplexVector::Zero(4);
  x(0) = 1.0;
  ComplexVector y = ComplexVector::Zero(4);
  y(3) = 1.0;
  const IntertwinerSolution blocked = solve_local_intertwiner(x, y, dims, Factor::A);
  CHECK(blocked.residual == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(blocked.a.norm() <= 1e-12);

  // Same source, reachable target |10>: the flip on A does it exactly.
  ComplexVector reachable = ComplexVector::Zero(4);
  reachable(2) = 1.0;
  const IntertwinerSolution flip = solve_local_intertwiner(x, reachable, dims, Factor::A);
  CHECK(flip.residual <= 1e-12);

  // Full-Schmidt-rank source reaches every target exactly, on either side.
  RandomStream stream(131);
  const ComplexVector target = stream.haar_vector(4);
  CHECK(solve_local_intertwiner(singlet(), target, dims, Factor::A).residual <= 1e-10);
  CHECK(solve_local_intertwiner(singlet(), target, dims, Factor::B).residual <= 1e-10);

  // The mirrored solve acts on the B factor.
  const IntertwinerSolution mirrored =
      solve_local_intertwiner(singlet(), target, dims, Factor::B);
  const ComplexMatrix lifted =
      tensor_product(ComplexMatrix::Identity(2, 2), mirrored.a);
  CHECK((lifted * singlet() - target).norm() <= 1e-10);

  CHECK_THROWS_AS(solve_local_intertwiner(ComplexVector::Zero(4), target, dims, Factor::A),
                  std::invalid_argument);
}

TEST_CASE("experiments pass at their native dimensions") {
  const std::uint64_t seed = 2024;
  SUBCASE("cyclic approximation") {
    const ExperimentReport report = run_cyclic_approximation(seed, {2, 2}, 25);
    CHECK(report.all_pass());
    CHECK(report.find("intertwiner-residual") != nullptr);
    CHECK(report.find("intertwiner-residual")->worst_residual <= 1e-8);
    CHECK(run_cyclic_approximation(seed, {3, 2}, 10).all_pass());  // rectangular
  }
  SUBCASE("component density") {
    const ExperimentReport report = run_component_density(seed, {2, 2}, 50);
    CHECK(report.all_pass());
    CHECK(report.find("remainder-positive")->worst_residual <= tol::kPsdFloor);
  }
  SUBCASE("invertible cyclicity") {
    CHECK(run_invertible_cyclicity(seed, {2, 2}, 25).all_pass());
    CHECK(run_invertible_cyclicity(seed, {3, 3}, 10).all_pass());
  }
  SUBCASE("no creation") {
    const ExperimentReport report = run_no_creation(seed, {2, 2}, 50);
    CHECK(report.all_pass());
    // The control invariant's residual is the least partial-transpose
    // eigenvalue of the controlled-flip output: -1/2 at these dims.
    CHECK(report.find("nonlocal-control-creates")->worst_residual ==
          doctest::Approx(-0.5).epsilon(1e-12));
  }
  SUBCASE("generic entanglement") {
    CHECK(run_generic_entanglement(seed, {2, 2}, 25).all_pass());
  }
  SUBCASE("abelian classical") {
    const ExperimentReport report = run_abelian_classical({2, 2});
    CHECK(report.all_pass());
    // Fixed internal seed: dims alone determine the report.
    CHECK(same_invariants(report, run_abelian_classical({2, 2})));
  }
  SUBCASE("preparation contrast") {
    const ExperimentReport report = run_preparation_contrast(seed, {2, 3}, 10);
    CHECK(report.all_pass());
    CHECK(report.find("channel-completeness")->worst_residual <= 1e-12);
  }
}

TEST_CASE("impossible dimensions are refused, not failed") {
  CHECK_THROWS_AS(run_cyclic_approximation(1, {2, 3}, 5), ExperimentRefused);
  CHECK_THROWS_AS(run_component_density(1, {2, 3}, 5), ExperimentRefused);
  CHECK_THROWS_AS(run_invertible_cyclicity(1, {2, 3}, 5), ExperimentRefused);
  CHECK_THROWS_AS(run_invertible_cyclicity(1, {1, 1}, 5), ExperimentRefused);
  CHECK_THROWS_AS(run_no_creation(1, {1, 4}, 5), ExperimentRefused);
  CHECK_THROWS_AS(run_generic_entanglement(1, {1, 1}, 5), ExperimentRefused);
  CHECK_THROWS_AS(run_abelian_classical({1, 4}), ExperimentRefused);
  CHECK_THROWS_AS(run_cyclic_approximation(1, {0, 2}, 5), std::invalid_argument);
}

TEST_CASE("reports are deterministic in the seed and independent of threads") {
  const ExperimentReport once = run_no_creation(7, {2, 2}, 20);
  const ExperimentReport twice = run_no_creation(7, {2, 2}, 20);
  CHECK(same_invariants(once, twice));

  // Thread count must not change any residual: max-reduction over
  // seed-substreamed trials is schedule-independent.
  setenv("OPERON_THREADS", "3", 1);
  const ExperimentReport threaded = run_no_creation(7, {2, 2}, 20);
  setenv("OPERON_THREADS", "1", 1);
  const ExperimentReport serial = run_no_creation(7, {2, 2}, 20);
  unsetenv("OPERON_THREADS");
  CHECK(same_invariants(once, threaded));
  CHECK(same_invariants(once, serial));

  // A different seed still passes but walks different trials.
  CHECK(run_no_creation(8, {2, 2}, 20).all_pass());
}

TEST_CASE("thread cap reads the environment") {
  setenv("OPERON_THREADS", "7", 1);
  CHECK(max_threads() == 7);
  setenv("OPERON_THREADS", "not-a-number", 1);
  CHECK(max_threads() == 1);
  setenv("OPERON_THREADS", "-2", 1);
  CHECK(max_threads() == 1);
  unsetenv("OPERON_THREADS");
  CHECK(max_threads() >= 1);
}

TEST_CASE("registry exposes every experiment with runnable obstruction checks") {
  const std::vector<ExperimentEntry>& registry = experiment_registry();
  CHECK(registry.size() == 7);
  for (const ExperimentEntry& entry : registry) {
    CHECK(!entry.name.empty());
    CHECK(entry.default_trials > 0);
    CHECK(!entry.obstruction({2, 2}).has_value());  // 2x2 runs everything
  }
  // Rectangular dims: square-only experiments report an obstruction instead
  // of running.
  int refusals = 0;
  for (const ExperimentEntry& entry : registry) {
    if (entry.obstruction({3, 2}).has_value()) ++refusals;
  }
  CHECK(refusals == 3);  // component-density, invertible-cyclicity, generic-entanglement

  // Entries run through their type-erased callable.
  for (const ExperimentEntry& entry : registry) {
    if (entry.name != "cyclic-approximation") continue;
    const ExperimentReport report = entry.run(5, {2, 2}, 10);
    CHECK(report.all_pass());
    CHECK(report.name == "cyclic-approximation");
  }
}

}  // TEST_SUITE
