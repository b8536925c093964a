#pragma once

// The one-variable model space Q_theta = H^2 ⊖ theta H^2 of a finite Blaschke
// product. Vectors are coordinate vectors in the Takenaka-Malmquist basis
//
//   e_k(z) = sqrt(1 - |a_k|^2) / (1 - conj(a_k) z) * prod_{j<k} b_{a_j}(z),
//
// which stays orthonormal with repeated zeros. Ambient H^2 work (multiplying by z,
// backward shifts, projecting arbitrary functions) happens on samples over a
// uniform boundary grid, integrated with the trapezoid rule.

#include <vector>

#include <pjb/blaschke.hpp>
#include <pjb/linalg.hpp>

namespace pjb {

struct QuadratureOptions {
  int min_nodes = 256;
  int max_nodes = 1 << 16;
  /// K is the smallest power of two with (max|a_j|)^K below this.
  double decay_target = 1e-16;
  double gram_tolerance = 1e-10;
};

class ModelSpace {
public:
  /// Throws precondition for a constant theta, IllConditioned if the Gram residual
  /// stays above opts.gram_tolerance after refining the grid.
  explicit ModelSpace(BlaschkeProduct theta, QuadratureOptions opts = {});

  const BlaschkeProduct& theta() const noexcept { return theta_; }
  int dim() const noexcept { return theta_.degree(); }
  const std::vector<cplx>& nodes() const noexcept { return nodes_; }
  int node_count() const noexcept { return static_cast<int>(nodes_.size()); }

  /// Basis values on the grid: row = node, column = basis index.
  const Mat& basis_samples() const noexcept { return samples_; }

  /// theta on the grid.
  const Vec& theta_samples() const noexcept { return theta_samples_; }

  /// (e_1(z), ..., e_d(z)) at any z away from the poles.
  Vec basis_at(cplx z) const;

  /// f(z) for coordinate vector(s): one value per column.
  Vec evaluate(const Mat& coords, cplx z) const;

  /// Boundary samples of the functions with the given coordinates.
  Mat to_samples(const Mat& coords) const;

  /// Coordinates of P_{Q_theta} f from boundary samples of f in H^2.
  Mat project_samples(const Mat& samples) const;

  /// Root-mean-square size of f - P_{Q_theta} f on the grid (0 iff f in Q_theta).
  double membership_residual(const Vec& samples) const;

  /// H^2 inner product <f, g> from boundary samples.
  cplx inner(const Vec& f, const Vec& g) const;

  /// Mean over the grid (= f(0) for f in H^2).
  cplx mean(const Vec& samples) const;

  /// ||Gram(basis) - I||_max on the grid.
  double gram_residual() const;

  /// Taylor coefficients f^{(j)}(a)/j!, j < order, of each coordinate column, by Cauchy
  /// integrals over the circle |z - a| = radius.
  Mat taylor_at(const Mat& coords, cplx a, int order, double radius = 0.05) const;

private:
  void sample(int k);

  BlaschkeProduct theta_;
  std::vector<cplx> nodes_;
  Mat samples_;
  Vec theta_samples_;
};

/// Matrix of S_theta = P_{Q_theta} T_z |_{Q_theta} in the TM basis.
Mat compressed_shift(const ModelSpace& ms);

struct ModelVector {
  Vec coords;
  /// Size of the part of the sampled function that lies outside Q_theta.
  double membership_residual = 0.0;
};

/// Coordinates of T_z^{*m} theta, m >= 1, computed on samples by repeated
/// f -> (f - f(0)) / w and projected onto the basis.
ModelVector backward_shift_theta(const ModelSpace& ms, int m);

/// T_z^{*p} theta for p = 1 .. count in one pass.
std::vector<ModelVector> backward_shift_sequence(const ModelSpace& ms, int count);

struct ProjectOne {
  /// Coordinates of 1 - conj(theta(0)) theta.
  Vec coords;
  /// Distance to the direct projection of the constant 1, whose coordinates are conj(e_j(0)).
  double direct_residual = 0.0;
  /// Ambient residual 1 - P(1) tested against Q_theta: max |<1 - P 1, e_j>|.
  double orthogonality_residual = 0.0;
};

ProjectOne project_one(const ModelSpace& ms);

struct DefectResiduals {
  double residual_ss = 0.0;   // ||(I - S S^*) - v v^*||_F, v = P_Q 1
  double residual_s_s = 0.0;  // ||(I - S^* S) - w w^*||_F, w = T_z^* theta
};

DefectResiduals defect_identities(const ModelSpace& ms);

/// ||I - sum_{p=1}^{tail} w_p w_p^*||_F with w_p = T_z^{*p} theta.
/// Throws TailTooShort unless (max|a_j|)^{2 tail} < 1e-12.
double parseval_frame_residual(const ModelSpace& ms, int tail);

/// Smallest tail satisfying the decay bound used by parseval_frame_residual.
int parseval_minimal_tail(const ModelSpace& ms);

/// True iff {S^{*p} T_z^* theta : 0 <= p < dim} spans Q_theta.
bool star_cyclicity_check(const ModelSpace& ms);

/// Krylov matrix [x, A x, ..., A^{count-1} x] for every column of x, side by side.
Mat krylov_block(const Mat& a, const Mat& x, int count);

}  // namespace pjb
