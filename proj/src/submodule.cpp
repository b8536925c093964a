#include <pjb/submodule.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include <pjb/errors.hpp>

namespace pjb {

namespace {

constexpr double vanishing_tolerance = 1e-7;

void require_ambient(const ModelSpace& ms, const Subspace& w) {
  if (w.ambient_dim() != ms.dim()) throw error(errc::precondition, "subspace does not live in this model space");
}

// Boundary samples of a Blaschke product on the model-space grid.
Vec samples_of(const ModelSpace& ms, const BlaschkeProduct& b) {
  Vec out(ms.node_count());
  for (int i = 0; i < ms.node_count(); ++i) out(i) = b(ms.nodes()[static_cast<std::size_t>(i)]);
  return out;
}

}  // namespace

double invariance_residual(const Mat& a, const Subspace& w) {
  if (w.is_zero()) return 0.0;
  return excess(w.frame(), a * w.frame());
}

Subspace build_submodule(const ModelSpace& ms, const Factorization& f) {
  const BlaschkeProduct& eta = f.left;
  const BlaschkeProduct& phi = f.right;
  if (!equal_up_to_unimodular(multiply(eta, phi), ms.theta())) {
    throw error(errc::not_a_factor, eta.to_string() + " * " + phi.to_string() + " does not factor " +
                                        ms.theta().to_string());
  }
  if (phi.is_constant()) return Subspace(ms.dim());

  // P_W = T_eta P_{Q_phi} T_eta^*. Expanding P_{Q_phi} in the basis of Q_phi gives
  // P_W e_k = sum_j <e_k, eta e^phi_j> eta e^phi_j, i.e. P_W = F F^* with
  // F_{kj} = <eta e^phi_j, e_k>.
  const ModelSpace inner_space(phi);
  const Vec eta_samples = samples_of(ms, eta);
  Mat lifted(ms.node_count(), inner_space.dim());
  for (int i = 0; i < ms.node_count(); ++i) {
    lifted.row(i) = eta_samples(i) * inner_space.basis_at(ms.nodes()[static_cast<std::size_t>(i)]).transpose();
  }
  const Mat f_mat = ms.project_samples(lifted);
  const Mat projector = f_mat * f_mat.adjoint();
  Subspace w = Subspace::span(projector);
  if (w.dim() != phi.degree()) {
    throw error(errc::ill_conditioned, "submodule dimension " + std::to_string(w.dim()) +
                                           " differs from deg(phi) = " + std::to_string(phi.degree()));
  }
  return w;
}

Factorization classify_by_matching(const ModelSpace& ms, const Subspace& w) {
  require_ambient(ms, w);
  double best = std::numeric_limits<double>::infinity();
  const Factorization* winner = nullptr;
  const auto all = factorizations(ms.theta());
  for (const auto& f : all) {
    if (f.right.degree() != w.dim()) continue;
    const double d = build_submodule(ms, f).distance(w);
    if (d < best) {
      best = d;
      winner = &f;
    }
  }
  if (winner == nullptr || best >= subspace_tolerance) {
    throw error(errc::no_match, "no factorization of " + ms.theta().to_string() + " reproduces the subspace");
  }
  return *winner;
}

Factorization classify_submodule(const ModelSpace& ms, const Subspace& w) {
  require_ambient(ms, w);
  if (w.is_zero()) throw error(errc::precondition, "classification needs a nonzero submodule");
  const Mat s = compressed_shift(ms);
  const double inv = invariance_residual(s, w);
  if (inv >= invariance_tolerance) {
    throw error(errc::not_invariant, "subspace is not S_theta-invariant (residual " + std::to_string(inv) + ")");
  }

  // eta's zeros: points of theta's zero set where all of W vanishes, to the order found.
  std::vector<cplx> eta_zeros;
  std::vector<cplx> phi_zeros;
  const Mat full = Mat::Identity(ms.dim(), ms.dim());
  for (const auto& cluster : distinct_zeros(ms.theta())) {
    const Mat reference = ms.taylor_at(full, cluster.point, cluster.multiplicity);
    const Mat values = ms.taylor_at(w.frame(), cluster.point, cluster.multiplicity);
    int vanishing = 0;
    while (vanishing < cluster.multiplicity &&
           values.row(vanishing).norm() <= vanishing_tolerance * reference.row(vanishing).norm()) {
      ++vanishing;
    }
    int taken = 0;
    for (const cplx a : ms.theta().zeros()) {
      if (std::abs(a - cluster.point) > zero_match_tolerance) continue;
      (taken++ < vanishing ? eta_zeros : phi_zeros).push_back(a);
    }
  }
  Factorization candidate{BlaschkeProduct(1.0, eta_zeros, ms.theta().guard()),
                          BlaschkeProduct(ms.theta().constant(), phi_zeros, ms.theta().guard())};
  if (candidate.right.degree() == w.dim() && build_submodule(ms, candidate).distance(w) < subspace_tolerance) {
    return candidate;
  }
  return classify_by_matching(ms, w);
}

CyclicReport projected_cyclic_checks(const ModelSpace& ms, const Subspace& w) {
  require_ambient(ms, w);
  if (w.is_zero()) throw error(errc::precondition, "cyclic checks need a nonzero submodule");
  const Factorization f = classify_submodule(ms, w);
  CyclicReport rep;
  rep.dim = static_cast<int>(w.dim());

  const Vec t = backward_shift_theta(ms, 1).coords;
  const Vec v = w.project(t);
  rep.projected_norm = v.norm();

  // eta * T_z^* phi on the grid
  const cplx phi0 = f.right(0.0);
  Vec shifted(ms.node_count());
  double phi_shift_norm2 = 0.0;
  for (int i = 0; i < ms.node_count(); ++i) {
    const cplx node = ms.nodes()[static_cast<std::size_t>(i)];
    const cplx g = (f.right(node) - phi0) / node;
    phi_shift_norm2 += std::norm(g);
    shifted(i) = f.left(node) * g;
  }
  phi_shift_norm2 /= ms.node_count();
  rep.shifted_factor_residual = (v - ms.project_samples(shifted)).norm();

  const Vec u = w.project(Vec(t * (t.dot(v) / t.squaredNorm())));
  rep.alpha = std::real(v.dot(u)) / v.squaredNorm();
  rep.eigen_residual = (u - rep.alpha * v).norm();
  rep.alpha_expected = phi_shift_norm2 / t.squaredNorm();

  const Mat s_star = compressed_shift(ms).adjoint();
  const Mat krylov = w.project(krylov_block(s_star, v, ms.dim()));
  rep.krylov_rank = numerical_rank(krylov);
  return rep;
}

double orthogonality_impossibility(const ModelSpace& ms, const Subspace& w1, const Subspace& w2) {
  require_ambient(ms, w1);
  require_ambient(ms, w2);
  if (w1.is_zero() || w2.is_zero()) throw error(errc::precondition, "both submodules must be nonzero");
  return spectral_norm(w1.frame().adjoint() * w2.frame());
}

Subspace star_closure_full(const ModelSpace& ms, const Subspace& w) {
  require_ambient(ms, w);
  if (w.is_zero()) throw error(errc::precondition, "closure needs a nonzero submodule");
  const Mat s_star = compressed_shift(ms).adjoint();
  return Subspace::span(krylov_block(s_star, w.frame(), ms.dim()));
}

}  // namespace pjb
