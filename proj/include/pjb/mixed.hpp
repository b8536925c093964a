#pragma once

// The mixed space H^2(D^m) ⊗ Q_Theta with the Hardy factor truncated to polynomials of
// degree <= N in each variable. The truncated shift z^k -> z^{k+1} (z^N -> 0) agrees
// with the true shift away from the top degree, so every statement about T_i^* or
// defect operators is checked on the window of vectors that the truncated shifts keep
// inside the subspace.

#include <string>
#include <vector>

#include <pjb/tensor.hpp>

namespace pjb {

inline constexpr double window_tolerance = 1e-6;

class TruncatedHardy {
public:
  /// Throws precondition unless num_vars >= 1 and degree_cap >= 1.
  TruncatedHardy(int num_vars, int degree_cap);

  int num_vars() const noexcept { return num_vars_; }
  int degree_cap() const noexcept { return degree_cap_; }
  /// (N + 1)^num_vars; monomials z^k with the last variable varying fastest.
  int dim() const noexcept { return dim_; }
  std::vector<int> slot_dims() const { return std::vector<int>(static_cast<std::size_t>(num_vars_), degree_cap_ + 1); }
  /// One-variable truncated shift on C^{N+1}.
  Mat shift() const;
  /// T_{z_i} on the whole truncated space.
  Mat apply(int i, const Mat& x) const;

private:
  int num_vars_;
  int degree_cap_;
  int dim_;
};

/// A separable inner function phi(z) = prod_i phi_i(z_i), one Blaschke product per variable.
struct InnerGenerator {
  std::vector<BlaschkeProduct> per_var;

  int degree(int i) const { return per_var.at(static_cast<std::size_t>(i)).degree(); }
  int max_degree() const;
  bool is_constant() const;
  /// Unimodular-constant-free comparison, variable by variable.
  bool equivalent(const InnerGenerator& other, double tol = zero_match_tolerance) const;
  /// phi(z_1, ..., z_m).
  cplx operator()(std::span<const cplx> z) const;
  /// e.g. "z" or "b(0.5) ⊗ z^2", "1" for the constant.
  std::string to_string() const;
};

class MixedSpace {
public:
  /// Throws precondition if jb has an auxiliary slot, SizeBudgetExceeded if the ambient
  /// dimension exceeds 4096.
  MixedSpace(TruncatedHardy hardy, JordanBlockProduct jordan);

  const TruncatedHardy& hardy() const noexcept { return hardy_; }
  const JordanBlockProduct& jordan() const noexcept { return jordan_; }
  int ambient_dim() const noexcept { return hardy_.dim() * jordan_.total_dim(); }
  /// Hardy slots first, then one slot per model-space factor.
  const std::vector<int>& slot_dims() const noexcept { return slot_dims_; }

  /// T_i = T_{z_i} ⊗ I.
  Mat apply_t(int i, const Mat& x) const;
  Mat apply_t_adjoint(int i, const Mat& x) const;
  /// S_j = I ⊗ S_Theta_j.
  Mat apply_s(int j, const Mat& x) const;
  Mat apply_s_adjoint(int j, const Mat& x) const;

private:
  TruncatedHardy hardy_;
  JordanBlockProduct jordan_;
  std::vector<int> slot_dims_;
};

/// phi * (polynomials of degree <= N - deg_i(phi) in variable i), truncated at degree N.
/// Throws DegreeBudget unless deg_i(phi) <= N / 2 for every variable.
Subspace build_inner_submodule(const TruncatedHardy& th, const InnerGenerator& phi);

struct BeurlingResult {
  InnerGenerator generator;
  /// Unit vector spanning the range of prod_i (P_S - P_{T_i Window_i}) on S.
  Vec defect_vector;
  /// sigma_2 / sigma_1 of that defect product (0 for an exact rank-one operator).
  double rank_one_residual = 0.0;
  /// Principal-angle distance between S and the subspace rebuilt from the generator.
  double reconstruction_residual = 0.0;
  /// Largest gap on 16 boundary points between the defect vector and the one the
  /// candidate generator produces, after aligning phases.
  double boundary_residual = 0.0;
};

/// Recover the inner generator of a truncated Beurling subspace S = phi H^2.
/// Throws precondition (zero S), NotRankOne, TruncationInconclusive (N < 2 deg + 2).
BeurlingResult beurling_extract(const TruncatedHardy& th, const Subspace& s);

struct MixedCheck {
  /// max_j ||(I - P_M) S_j P_M||
  double s_invariance = 0.0;
  /// Dimension of {x in M : T_i x in M for all i} and its codimension in M.
  int window_dim = 0;
  int window_codim = 0;
  /// Largest violation of the doubly commuting relations among the compressions of
  /// T_i (on the window) and S_j. Only computed for S-invariant M.
  double doubly_commuting_residual = 0.0;

  bool submodule() const { return s_invariance < invariance_tolerance; }
  /// The window must keep at least two thirds of M.
  bool window_adequate() const { return window_dim > 0 && 3 * window_codim <= window_dim + window_codim; }
  bool doubly_commuting() const { return submodule() && doubly_commuting_residual < 1e-8; }
};

/// Invariance, window and commutation residuals of a subspace of the mixed space.
MixedCheck check_mixed(const MixedSpace& msp, const Subspace& m);

struct MixedDecomposition {
  BeurlingResult hardy;
  Subspace hardy_part;
  std::vector<CoordinateFactor> factors;
  double doubly_commuting_residual = 0.0;
  double reconstruction_residual = 0.0;
  int window_codim = 0;
};

/// M = phi H^2 ⊗ W_1 ⊗ ... ⊗ W_r.
/// Throws precondition, NotASubmodule, NotDoublyCommuting, TruncationInconclusive,
/// NotRankOne, ReconstructionMismatch.
MixedDecomposition decompose_mixed(const MixedSpace& msp, const Subspace& m);

/// phi H^2 ⊗ (⊗ eta_j Q_phi_j) in the ambient of msp.
Subspace mixed_submodule(const MixedSpace& msp, const InnerGenerator& phi, const std::vector<Factorization>& fs);

}  // namespace pjb
