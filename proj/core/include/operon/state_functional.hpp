#pragma once

#include <string>

#include "operon/numerics.hpp"

namespace operon {

// Normal state given by its density operator. Construction validates:
// Hermitian (within 1e-10 relative), eigenvalues >= -1e-10, trace within
// 1e-10 of one; violations throw std::invalid_argument.
class StateFunctional {
 public:
  explicit StateFunctional(ComplexMatrix density, std::string label = "");

  int dim() const { return static_cast<int>(density_.rows()); }
  const ComplexMatrix& density() const { return density_; }
  const std::string& label() const { return label_; }

  Complex operator()(const ComplexMatrix& observable) const;

 private:
  ComplexMatrix density_;
  std::string label_;
};

Complex expectation(const StateFunctional& rho, const ComplexMatrix& z);

// Pure state x x* / |x|^2; throws on (near-)zero x.
StateFunctional vector_state(const ComplexVector& x, std::string label = "");

// Restriction of a bipartite state to one tensor factor.
StateFunctional reduced_state(const StateFunctional& rho, Dims dims, Factor keep);

}  // namespace operon
