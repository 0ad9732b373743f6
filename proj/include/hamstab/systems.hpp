#pragma once

#include <optional>
#include <string>

#include "hamstab/coeffs.hpp"
#include "hamstab/ere.hpp"
#include "hamstab/symplectic.hpp"

namespace hamstab {

/// A named, fully specified Lagrangian boundary problem.
struct BoundaryProblem {
  std::string name;
  CoefficientPath b;
  CoefficientPath d;
  BoundaryPair boundary;
  std::optional<EREConfig> ere;  // set for the relative-equilibrium systems
};

/// n = 1, T = 1, B = 0, D = [[0,1],[1,0]], frames (1,0) and (0,1). The
/// boundary problem has no eigenvalue at all, yet the Hill ratio at
/// alpha = 1 is exp(-1) and the conditional trace is 1.
BoundaryProblem make_counterexample33();

/// n = 1, T = 1, B = 0, D = I, horizontal-to-vertical boundary
/// (theta = pi/2): the ladder spectrum (k + 1/2) pi.
BoundaryProblem make_dirichlet_free();

/// Same boundary, B = nu * I.
BoundaryProblem make_constant_nu(double nu);

/// Essential-part systems on the half period [0, pi] with the E^+_{-1}
/// (default) or E^-_{-1} boundary pair; B is the e = 0 block and
/// D = B_e - B_0 restricted to the half period.
BoundaryProblem make_ere_problem(const EREConfig& cfg, bool plus_space = true);

/// Resolves a builtin name: counterexample33, dirichlet-free, constant-nu,
/// lagrange, euler. Parameters nu/beta/delta/e are taken from the arguments.
BoundaryProblem make_builtin(const std::string& name, double nu, double beta, double delta,
                             double e, bool plus_space = true);

}  // namespace hamstab
