#pragma once

// Jordan blocks of the polydisc: Q_Theta = Q_theta1 ⊗ ... ⊗ Q_thetan with the tuple
// S_Theta_j = I ⊗ .. ⊗ S_theta_j ⊗ .. ⊗ I, optionally preceded by an auxiliary
// Hilbert space slot H. Operators are applied slot-wise and materialized densely only
// on request.

#include <vector>

#include <pjb/model_space.hpp>
#include <pjb/submodule.hpp>
#include <pjb/subspace.hpp>

namespace pjb {

inline constexpr int max_coordinates = 4;
inline constexpr std::int64_t max_total_dim = 4096;

class JordanBlockProduct {
public:
  /// Throws SizeBudgetExceeded unless 1 <= n <= 4 and total_dim * max(aux_dim, 1) <= 4096.
  JordanBlockProduct(std::vector<ModelSpace> factors, int aux_dim = 0);

  const std::vector<ModelSpace>& factors() const noexcept { return factors_; }
  int coordinates() const noexcept { return static_cast<int>(factors_.size()); }
  int aux_dim() const noexcept { return aux_dim_; }
  /// Dimension of Q_Theta, without the auxiliary slot.
  int total_dim() const noexcept { return total_dim_; }
  /// Dimension of the space the operators act on: total_dim * max(aux_dim, 1).
  int ambient_dim() const noexcept { return total_dim_ * (aux_dim_ > 0 ? aux_dim_ : 1); }
  /// Slot dimensions of the ambient space, the auxiliary slot first when present.
  const std::vector<int>& slot_dims() const noexcept { return slot_dims_; }
  /// Slot holding coordinate j.
  std::size_t slot_of(int j) const noexcept { return static_cast<std::size_t>(j + (aux_dim_ > 0 ? 1 : 0)); }
  /// Compressed shift of factor j (its own TM basis).
  const Mat& shift(int j) const { return shifts_.at(static_cast<std::size_t>(j)); }

  Mat apply(int j, const Mat& x) const;
  Mat apply_adjoint(int j, const Mat& x) const;
  /// Dense S_Theta_j on the ambient space.
  Mat dense_op(int j) const;

  /// max over i != j of ||[S_i, S_j]|| and ||[S_i^*, S_j]||, probed on a seeded random
  /// orthonormal block (the whole ambient basis when it is small).
  double commutator_residual() const;
  double max_shift_norm() const;

private:
  std::vector<ModelSpace> factors_;
  std::vector<Mat> shifts_;
  std::vector<int> slot_dims_;
  int aux_dim_ = 0;
  int total_dim_ = 1;
};

struct ResidualReport {
  double residual = 0.0;
  bool pass = false;
};

/// max_j ||(I - P_M) S_j P_M||; pass iff < invariance_tolerance.
ResidualReport is_submodule(const JordanBlockProduct& jb, const Subspace& m);

/// Compressions R_j = F^* S_j F on a submodule with frame F.
std::vector<Mat> compressions(const JordanBlockProduct& jb, const Subspace& m);

/// max over i != j of ||R_i R_j^* - R_j^* R_i||; pass iff < 1e-8. Throws NotASubmodule.
ResidualReport is_doubly_commuting(const JordanBlockProduct& jb, const Subspace& m);

/// max_j over `coords` of the invariance and star-invariance residuals.
double reducing_residual(const JordanBlockProduct& jb, const Subspace& m, const std::vector<int>& coords);

/// Smallest subspace containing m and invariant under S_j^* for j in coords.
Subspace star_krylov_closure(const JordanBlockProduct& jb, const Subspace& m, const std::vector<int>& coords);

/// For M = L ⊗ Q_Theta reducing every S_j, recover L inside the auxiliary slot.
/// Throws precondition (no auxiliary slot), NotReducing, ReconstructionMismatch.
Subspace reducing_split(const JordanBlockProduct& jb, const Subspace& m);

struct CoordinateFactor {
  Subspace w;
  Factorization factorization;
};

/// M = W_1 ⊗ ... ⊗ W_n for a doubly commuting submodule of Q_Theta (no auxiliary slot).
/// `order` fixes which coordinate is peeled off first (default 0, 1, ..., n-1); the
/// result is always listed by coordinate.
/// Throws precondition, NotASubmodule, NotDoublyCommuting, ReconstructionMismatch.
std::vector<CoordinateFactor> decompose_doubly_commuting(const JordanBlockProduct& jb, const Subspace& m,
                                                         std::vector<int> order = {});

// Building blocks shared with the mixed Hardy decomposition.

/// Smallest subspace containing ran(frame) and invariant under op^* for every
/// (slot, op) pair, over the given slot dimensions.
Mat slot_star_closure(const std::vector<int>& dims, const std::vector<std::pair<std::size_t, const Mat*>>& ops,
                      const Mat& frame);

/// For M = L ⊗ Q_theta1 ⊗ ... over slots (lead, factors...), the L part in the leading slot:
/// the eigenspace at 1 of (I ⊗ w)^* P_M (I ⊗ w), w = ⊗ unit T_z^* theta_i.
Mat split_leading_slot(std::vector<int> dims, const std::vector<const ModelSpace*>& factors, const Mat& frame);

/// ⊗ W_i in the ambient of jb.
Subspace tensor_submodule(const std::vector<Subspace>& parts);

/// ⊗ eta_i Q_phi_i, preceded by the whole auxiliary slot when jb has one.
Subspace tensor_submodule(const JordanBlockProduct& jb, const std::vector<Factorization>& fs);

}  // namespace pjb
