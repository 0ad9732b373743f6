#include "hamstab/systems.hpp"

#include <cmath>

#include "hamstab/errors.hpp"

namespace hamstab {

namespace {

BoundaryPair dirichlet_boundary() {
  Vec theta(1);
  theta << M_PI / 2.0;
  return boundary_from_angles(theta);
}

}  // namespace

BoundaryProblem make_counterexample33() {
  Mat d(2, 2);
  d << 0, 1, 1, 0;
  Mat z0(2, 1), z1(2, 1);
  z0 << 1, 0;
  z1 << 0, 1;
  return {"counterexample33", CoefficientPath::zero(1, 1.0), CoefficientPath::constant(d, 1.0),
          normalize_boundary_pair(LagrangianFrame(z0), LagrangianFrame(z1)), std::nullopt};
}

BoundaryProblem make_dirichlet_free() {
  return {"dirichlet-free", CoefficientPath::zero(1, 1.0),
          CoefficientPath::constant(Mat::Identity(2, 2), 1.0), dirichlet_boundary(),
          std::nullopt};
}

BoundaryProblem make_constant_nu(double nu) {
  return {"constant-nu", CoefficientPath::constant(nu * Mat::Identity(2, 2), 1.0),
          CoefficientPath::constant(Mat::Identity(2, 2), 1.0), dirichlet_boundary(),
          std::nullopt};
}

BoundaryProblem make_ere_problem(const EREConfig& cfg, bool plus_space) {
  const CoefficientPath full_b0 = meyer_schmidt_system({cfg.family, cfg.param, 0.0});
  const CoefficientPath full_be = meyer_schmidt_system(cfg);
  return {cfg.family == EREFamily::lagrange ? "lagrange" : "euler",
          full_b0.restricted(M_PI), full_be.plus(full_b0, -1.0).restricted(M_PI),
          ere_half_boundary(plus_space), cfg};
}

BoundaryProblem make_builtin(const std::string& name, double nu, double beta, double delta,
                             double e, bool plus_space) {
  if (name == "counterexample33") return make_counterexample33();
  if (name == "dirichlet-free") return make_dirichlet_free();
  if (name == "constant-nu") return make_constant_nu(nu);
  if (name == "lagrange") return make_ere_problem({EREFamily::lagrange, beta, e}, plus_space);
  if (name == "euler") return make_ere_problem({EREFamily::euler, delta, e}, plus_space);
  throw ConfigError("unknown builtin system '" + name +
                    "' (expected counterexample33, dirichlet-free, constant-nu, lagrange, "
                    "euler)");
}

}  // namespace hamstab
