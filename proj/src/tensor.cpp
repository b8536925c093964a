#include <pjb/tensor.hpp>

#include <algorithm>
#include <numeric>

#include <pjb/errors.hpp>

namespace pjb {

namespace {

constexpr double commute_tolerance = 1e-8;
constexpr double reconstruction_tolerance = 1e-7;

// Unit vector T_z^* theta / ||T_z^* theta|| in the TM coordinates of ms.
Vec unit_backward_shift(const ModelSpace& ms) {
  const Vec t = backward_shift_theta(ms, 1).coords;
  return t / t.norm();
}

}  // namespace

Mat slot_star_closure(const std::vector<int>& dims, const std::vector<std::pair<std::size_t, const Mat*>>& ops,
                      const Mat& frame) {
  if (frame.cols() == 0 || ops.empty()) return frame;
  Mat cur = frame;
  const auto cap = product(dims);
  for (std::int64_t iter = 0; iter <= cap; ++iter) {
    Mat block(cur.rows(), cur.cols() * static_cast<Eigen::Index>(ops.size() + 1));
    block.leftCols(cur.cols()) = cur;
    for (std::size_t k = 0; k < ops.size(); ++k) {
      block.middleCols(cur.cols() * static_cast<Eigen::Index>(k + 1), cur.cols()) =
          apply_on_slot(dims, ops[k].first, ops[k].second->adjoint(), cur);
    }
    Mat next = orthonormal_range(block);
    if (next.cols() == cur.cols()) return next;
    cur = std::move(next);
  }
  return cur;
}

// A = (I ⊗ w)^* P_M (I ⊗ w) equals P_L exactly when M = L ⊗ Q.
Mat split_leading_slot(std::vector<int> dims, const std::vector<const ModelSpace*>& rest, const Mat& frame) {
  Mat c = frame;
  for (std::size_t k = rest.size(); k-- > 0;) {
    c = contract_slot(dims, k + 1, unit_backward_shift(*rest[k]), c);
    dims.pop_back();
  }
  return hermitian_range(c * c.adjoint(), 0.5);
}

namespace {

Mat kron_identity(const Mat& lead, Eigen::Index rest_dim) {
  return kron(lead, Mat::Identity(rest_dim, rest_dim));
}

std::vector<Mat> decompose_frames(const std::vector<const ModelSpace*>& fs, const std::vector<Mat>& shifts,
                                  const Mat& frame) {
  if (fs.size() == 1) return {frame};
  std::vector<int> dims;
  for (const auto* f : fs) dims.push_back(f->dim());
  std::vector<std::pair<std::size_t, const Mat*>> others;
  for (std::size_t k = 1; k < fs.size(); ++k) others.emplace_back(k, &shifts[k]);

  // M_1 = closure of M under S_2^*, .., S_n^* is W_1 ⊗ Q_theta2 ⊗ ... ⊗ Q_thetan.
  const Mat m1 = slot_star_closure(dims, others, frame);
  const std::vector<const ModelSpace*> rest(fs.begin() + 1, fs.end());
  const Mat w1 = split_leading_slot(dims, rest, m1);
  if (w1.cols() == 0) throw error(errc::reconstruction_mismatch, "empty leading factor");

  // M = W_1 ⊗ E: contracting the first slot with a unit vector of W_1 leaves E.
  Vec u = w1 * (w1.adjoint() * backward_shift_theta(*fs[0], 1).coords);
  if (u.norm() < 1e-12) u = w1.col(0);
  u /= u.norm();
  const Mat e = orthonormal_range(contract_slot(dims, 0, u, frame));

  std::vector<Mat> out{w1};
  const std::vector<Mat> rest_shifts(shifts.begin() + 1, shifts.end());
  for (auto& f : decompose_frames(rest, rest_shifts, e)) out.push_back(std::move(f));
  return out;
}

}  // namespace

JordanBlockProduct::JordanBlockProduct(std::vector<ModelSpace> factors, int aux_dim)
    : factors_(std::move(factors)), aux_dim_(aux_dim) {
  const auto n = static_cast<int>(factors_.size());
  if (n < 1 || n > max_coordinates) {
    throw error(errc::size_budget_exceeded, "between 1 and 4 factors are supported, got " + std::to_string(n));
  }
  if (aux_dim < 0) throw error(errc::precondition, "aux_dim must be nonnegative");
  std::int64_t total = 1;
  for (const auto& f : factors_) total *= f.dim();
  if (total * std::max(aux_dim, 1) > max_total_dim) {
    throw error(errc::size_budget_exceeded, "ambient dimension " + std::to_string(total * std::max(aux_dim, 1)) +
                                                " exceeds " + std::to_string(max_total_dim));
  }
  total_dim_ = static_cast<int>(total);
  if (aux_dim_ > 0) slot_dims_.push_back(aux_dim_);
  for (const auto& f : factors_) {
    slot_dims_.push_back(f.dim());
    shifts_.push_back(compressed_shift(f));
  }
  const double comm = commutator_residual();
  if (comm >= 1e-10) throw error(errc::ill_conditioned, "coordinate operators fail to commute: " + std::to_string(comm));
  const double norm = max_shift_norm();
  if (norm > 1.0 + 1e-10) throw error(errc::ill_conditioned, "compressed shift is not a contraction");
}

Mat JordanBlockProduct::apply(int j, const Mat& x) const {
  return apply_on_slot(slot_dims_, slot_of(j), shift(j), x);
}

Mat JordanBlockProduct::apply_adjoint(int j, const Mat& x) const {
  return apply_on_slot(slot_dims_, slot_of(j), shift(j).adjoint(), x);
}

Mat JordanBlockProduct::dense_op(int j) const {
  return apply(j, Mat::Identity(ambient_dim(), ambient_dim()));
}

double JordanBlockProduct::commutator_residual() const {
  const int n = coordinates();
  if (n < 2) return 0.0;
  const Eigen::Index probe_cols = std::min<Eigen::Index>(ambient_dim(), 32);
  const Mat probe = probe_cols == ambient_dim() ? Mat(Mat::Identity(ambient_dim(), ambient_dim()))
                                                : orthonormal_range(random_complex(ambient_dim(), probe_cols, 7));
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const Mat c1 = apply(i, apply(j, probe)) - apply(j, apply(i, probe));
      const Mat c2 = apply_adjoint(i, apply(j, probe)) - apply(j, apply_adjoint(i, probe));
      worst = std::max({worst, spectral_norm(c1), spectral_norm(c2)});
    }
  }
  return worst;
}

double JordanBlockProduct::max_shift_norm() const {
  double worst = 0.0;
  for (const auto& s : shifts_) worst = std::max(worst, spectral_norm(s));
  return worst;
}

ResidualReport is_submodule(const JordanBlockProduct& jb, const Subspace& m) {
  if (m.ambient_dim() != jb.ambient_dim()) throw error(errc::precondition, "subspace ambient dimension mismatch");
  ResidualReport rep;
  for (int j = 0; j < jb.coordinates(); ++j) {
    if (m.is_zero()) break;
    rep.residual = std::max(rep.residual, excess(m.frame(), jb.apply(j, m.frame())));
  }
  rep.pass = rep.residual < invariance_tolerance;
  return rep;
}

std::vector<Mat> compressions(const JordanBlockProduct& jb, const Subspace& m) {
  std::vector<Mat> out;
  for (int j = 0; j < jb.coordinates(); ++j) out.push_back(m.frame().adjoint() * jb.apply(j, m.frame()));
  return out;
}

ResidualReport is_doubly_commuting(const JordanBlockProduct& jb, const Subspace& m) {
  const ResidualReport sub = is_submodule(jb, m);
  if (!sub.pass) {
    throw error(errc::not_a_submodule, "subspace is not invariant (residual " + std::to_string(sub.residual) + ")");
  }
  const auto r = compressions(jb, m);
  ResidualReport rep;
  for (std::size_t i = 0; i < r.size(); ++i) {
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (i == j) continue;
      rep.residual = std::max(rep.residual, spectral_norm(r[i] * r[j].adjoint() - r[j].adjoint() * r[i]));
    }
  }
  rep.pass = rep.residual < commute_tolerance;
  return rep;
}

double reducing_residual(const JordanBlockProduct& jb, const Subspace& m, const std::vector<int>& coords) {
  if (m.is_zero()) return 0.0;
  double worst = 0.0;
  for (int j : coords) {
    worst = std::max({worst, excess(m.frame(), jb.apply(j, m.frame())),
                      excess(m.frame(), jb.apply_adjoint(j, m.frame()))});
  }
  return worst;
}

Subspace star_krylov_closure(const JordanBlockProduct& jb, const Subspace& m, const std::vector<int>& coords) {
  if (m.ambient_dim() != jb.ambient_dim()) throw error(errc::precondition, "subspace ambient dimension mismatch");
  std::vector<std::pair<std::size_t, const Mat*>> ops;
  for (int j : coords) {
    if (j < 0 || j >= jb.coordinates()) throw error(errc::precondition, "coordinate index out of range");
    ops.emplace_back(jb.slot_of(j), &jb.shift(j));
  }
  return Subspace::from_orthonormal(slot_star_closure(jb.slot_dims(), ops, m.frame()));
}

Subspace reducing_split(const JordanBlockProduct& jb, const Subspace& m) {
  if (jb.aux_dim() < 1) throw error(errc::precondition, "reducing_split needs an auxiliary slot");
  if (m.ambient_dim() != jb.ambient_dim()) throw error(errc::precondition, "subspace ambient dimension mismatch");
  std::vector<int> all(static_cast<std::size_t>(jb.coordinates()));
  std::iota(all.begin(), all.end(), 0);
  const double red = reducing_residual(jb, m, all);
  if (red >= invariance_tolerance) {
    throw error(errc::not_reducing, "subspace does not reduce the tuple (residual " + std::to_string(red) + ")");
  }
  std::vector<const ModelSpace*> rest;
  for (const auto& f : jb.factors()) rest.push_back(&f);
  const Mat l = split_leading_slot(jb.slot_dims(), rest, m.frame());
  const double d = subspace_distance(kron_identity(l, jb.total_dim()), m.frame());
  if (d >= reconstruction_tolerance) {
    throw error(errc::reconstruction_mismatch, "L ⊗ Q_Theta differs from M by " + std::to_string(d));
  }
  return Subspace::from_orthonormal(l);
}

std::vector<CoordinateFactor> decompose_doubly_commuting(const JordanBlockProduct& jb, const Subspace& m,
                                                         std::vector<int> order) {
  if (jb.aux_dim() != 0) throw error(errc::precondition, "decomposition works on Q_Theta without an auxiliary slot");
  if (m.ambient_dim() != jb.ambient_dim()) throw error(errc::precondition, "subspace ambient dimension mismatch");
  if (m.is_zero()) throw error(errc::precondition, "decomposition needs a nonzero submodule");
  const ResidualReport dc = is_doubly_commuting(jb, m);
  if (!dc.pass) {
    throw error(errc::not_doubly_commuting, "commutator residual " + std::to_string(dc.residual));
  }
  const int n = jb.coordinates();
  if (order.empty()) {
    order.resize(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
  }
  std::vector<int> check = order;
  std::sort(check.begin(), check.end());
  for (int k = 0; k < n; ++k) {
    if (check.size() != static_cast<std::size_t>(n) || check[static_cast<std::size_t>(k)] != k) {
      throw error(errc::precondition, "order must be a permutation of the coordinates");
    }
  }

  std::vector<const ModelSpace*> fs;
  std::vector<Mat> shifts;
  for (int k : order) {
    fs.push_back(&jb.factors()[static_cast<std::size_t>(k)]);
    shifts.push_back(jb.shift(k));
  }
  const Mat permuted = permute_slots(jb.slot_dims(), order, m.frame());
  const auto frames = decompose_frames(fs, shifts, permuted);

  std::vector<Subspace> parts(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    parts[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] =
        Subspace::from_orthonormal(frames[static_cast<std::size_t>(k)]);
  }
  const Subspace rebuilt = tensor_submodule(parts);
  const double d = rebuilt.distance(m);
  if (d >= reconstruction_tolerance) {
    throw error(errc::reconstruction_mismatch, "⊗W_i differs from M by " + std::to_string(d));
  }
  std::vector<CoordinateFactor> out;
  for (int k = 0; k < n; ++k) {
    const auto& part = parts[static_cast<std::size_t>(k)];
    out.push_back({part, classify_submodule(jb.factors()[static_cast<std::size_t>(k)], part)});
  }
  return out;
}

Subspace tensor_submodule(const std::vector<Subspace>& parts) {
  return tensor(std::span<const Subspace>(parts));
}

Subspace tensor_submodule(const JordanBlockProduct& jb, const std::vector<Factorization>& fs) {
  if (static_cast<int>(fs.size()) != jb.coordinates()) throw error(errc::precondition, "one factorization per coordinate");
  std::vector<Subspace> parts;
  for (std::size_t k = 0; k < fs.size(); ++k) parts.push_back(build_submodule(jb.factors()[k], fs[k]));
  Subspace t = tensor_submodule(parts);
  if (jb.aux_dim() > 0) {
    t = Subspace::from_orthonormal(kron(Mat::Identity(jb.aux_dim(), jb.aux_dim()), t.frame()));
  }
  return t;
}

}  // namespace pjb
