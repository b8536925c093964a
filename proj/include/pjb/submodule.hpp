#pragma once

// Submodules W = eta Q_phi of a single Jordan block S_theta.

#include <pjb/blaschke.hpp>
#include <pjb/model_space.hpp>
#include <pjb/subspace.hpp>

namespace pjb {

inline constexpr double invariance_tolerance = 1e-8;

/// ||(I - P_W) A P_W||_2: zero iff W is A-invariant.
double invariance_residual(const Mat& a, const Subspace& w);

/// eta Q_phi inside Q_theta, from the range of T_eta P_{Q_phi} T_eta^* on the grid.
/// Throws NotAFactor unless eta * phi = theta up to a unimodular constant.
Subspace build_submodule(const ModelSpace& ms, const Factorization& f);

/// Recover (eta, phi) with W = eta Q_phi. eta collects the zeros of theta at which every
/// function of W vanishes, with multiplicities read off Cauchy-integral Taylor
/// coefficients. Falls back to matching against every factorization.
/// Throws NotInvariant, precondition (zero W), NoMatch.
Factorization classify_submodule(const ModelSpace& ms, const Subspace& w);

/// Brute-force classification: the factorization whose submodule is closest to w.
Factorization classify_by_matching(const ModelSpace& ms, const Subspace& w);

struct CyclicReport {
  double projected_norm = 0.0;          // ||P_W T_z^* theta||
  double shifted_factor_residual = 0.0; // ||P_W T_z^* theta - eta T_z^* phi||
  double alpha = 0.0;                   // eigenvalue of P_W P_{C T^*theta} P_W at P_W T^*theta
  double alpha_expected = 0.0;          // (||T_z^* phi|| / ||T_z^* theta||)^2
  double eigen_residual = 0.0;          // ||P_W P P_W v - alpha v||
  int krylov_rank = 0;                  // rank of {P_W S^{*m} v}
  int dim = 0;

  bool nonzero_pass() const { return projected_norm > 1e-8; }
  bool factor_pass() const { return shifted_factor_residual < 1e-9; }
  bool alpha_pass() const { return std::abs(alpha - alpha_expected) < 1e-9 && eigen_residual < 1e-9; }
  bool krylov_pass() const { return krylov_rank == dim; }
  bool pass() const { return nonzero_pass() && factor_pass() && alpha_pass() && krylov_pass(); }
};

/// Projected cyclic-vector properties of T_z^* theta on a nonzero submodule.
CyclicReport projected_cyclic_checks(const ModelSpace& ms, const Subspace& w);

/// sigma_max(F_1^* F_2): cosine of the smallest principal angle.
double orthogonality_impossibility(const ModelSpace& ms, const Subspace& w1, const Subspace& w2);

/// Closure of a nonzero submodule under S_theta^* (powers 0 .. dim - 1).
Subspace star_closure_full(const ModelSpace& ms, const Subspace& w);

}  // namespace pjb
