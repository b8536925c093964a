#include <pjb/mixed.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include <pjb/errors.hpp>

namespace pjb {

namespace {

constexpr double root_cluster_tolerance = 1e-4;
constexpr double separability_tolerance = 1e-7;
constexpr int boundary_points = 16;

cplx snap(cplx a) {
  double re = a.real();
  double im = a.imag();
  if (std::abs(re) < 1e-13) re = 0.0;
  if (std::abs(im) < 1e-13) im = 0.0;
  return {re, im};
}

// {x in ran(frame) : op x in ran(frame)}, as an orthonormal frame inside the ambient.
Mat window_of(const Mat& frame, const std::vector<Mat>& images) {
  Mat stacked(frame.rows() * static_cast<Eigen::Index>(images.size()), frame.cols());
  for (std::size_t k = 0; k < images.size(); ++k) {
    stacked.middleRows(frame.rows() * static_cast<Eigen::Index>(k), frame.rows()) =
        images[k] - frame * (frame.adjoint() * images[k]);
  }
  if (stacked.rows() == 0) return frame;
  const Mat kernel = null_space(stacked);
  return frame * kernel;
}

// Range of prod_i (P_S - P_{T_i Window_i}) restricted to S, as S-coordinates (k x k).
Mat defect_product(const TruncatedHardy& th, const Mat& frame) {
  const Eigen::Index k = frame.cols();
  Mat prod = Mat::Identity(k, k);
  for (int i = 0; i < th.num_vars(); ++i) {
    const Mat win = window_of(frame, {th.apply(i, frame)});
    const Mat shifted = win.cols() > 0 ? orthonormal_range(th.apply(i, win)) : Mat(frame.rows(), 0);
    const Mat inside = frame.adjoint() * shifted;
    prod = (Mat::Identity(k, k) - inside * inside.adjoint()) * prod;
  }
  return prod;
}

// Roots of p_0 + p_1 x + ... + p_d x^d from the companion matrix.
std::vector<cplx> polynomial_roots(const Vec& p) {
  const Eigen::Index d = p.size() - 1;
  if (d <= 0) return {};
  if (std::abs(p(d)) < 1e-12 * p.norm()) {
    throw error(errc::not_rank_one, "annihilator recurrence has a degenerate leading coefficient");
  }
  Mat companion = Mat::Zero(d, d);
  for (Eigen::Index i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < d; ++i) companion(i, d - 1) = -p(i) / p(d);
  Eigen::ComplexEigenSolver<Mat> es(companion, false);
  std::vector<cplx> out(es.eigenvalues().data(), es.eigenvalues().data() + d);
  return out;
}

// Multiple roots come out split by about eps^(1/m); merge near-equal ones to their mean.
std::vector<cplx> merge_clusters(std::vector<cplx> roots) {
  std::vector<cplx> out;
  std::vector<bool> used(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    std::vector<std::size_t> members{i};
    used[i] = true;
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      if (!used[j] && std::abs(roots[j] - roots[i]) < root_cluster_tolerance) {
        members.push_back(j);
        used[j] = true;
      }
    }
    cplx mean = 0.0;
    for (auto m : members) mean += roots[m];
    mean /= static_cast<double>(members.size());
    for (std::size_t r = 0; r < members.size(); ++r) out.push_back(snap(mean));
  }
  return out;
}

// One variable: S in C^{N+1} of codimension d. Orthogonality to phi z^k, k <= N - d,
// forces the conjugated annihilator coefficients u_0 .. u_{N-d} to obey the linear
// recurrence whose characteristic polynomial has the zeros of phi as roots.
BlaschkeProduct generator_from_annihilator(const Mat& frame, int degree_cap) {
  const int n1 = degree_cap + 1;
  const int d = n1 - static_cast<int>(frame.cols());
  if (d == 0) return {};
  const Mat u = null_space(frame.adjoint()).conjugate();
  if (u.cols() != d) throw error(errc::not_rank_one, "annihilator dimension mismatch");
  const int rows_per = degree_cap - 2 * d + 1;
  Mat hankel(rows_per * d, d + 1);
  for (int j = 0; j < d; ++j) {
    for (int t = 0; t < rows_per; ++t) hankel.row(j * rows_per + t) = u.col(j).segment(t, d + 1).transpose();
  }
  Eigen::JacobiSVD<Mat> svd(hankel, Eigen::ComputeFullV);
  const Vec p = svd.matrixV().col(d);
  std::vector<cplx> zeros = merge_clusters(polynomial_roots(p));
  for (const cplx a : zeros) {
    if (std::abs(a) > default_zero_guard) {
      throw error(errc::not_rank_one, "recovered generator zero lies outside the guarded disc");
    }
  }
  return BlaschkeProduct(1.0, std::move(zeros));
}

cplx evaluate_polynomial(const std::vector<int>& dims, const Vec& coeffs, std::span<const cplx> z) {
  cplx total = 0.0;
  std::vector<int> idx(dims.size(), 0);
  for (Eigen::Index flat = 0; flat < coeffs.size(); ++flat) {
    cplx term = coeffs(flat);
    for (std::size_t i = 0; i < dims.size(); ++i) term *= std::pow(z[i], idx[i]);
    total += term;
    for (std::size_t i = dims.size(); i-- > 0;) {
      if (++idx[i] < dims[i]) break;
      idx[i] = 0;
    }
  }
  return total;
}

// Boundary points (zeta^k, zeta^{3k}, zeta^{5k}, ...) with zeta = exp(2 pi i / 16).
std::vector<std::vector<cplx>> boundary_grid(int num_vars) {
  std::vector<std::vector<cplx>> out;
  for (int k = 0; k < boundary_points; ++k) {
    std::vector<cplx> pt;
    for (int i = 0; i < num_vars; ++i) {
      pt.push_back(std::polar(1.0, 2.0 * std::numbers::pi * k * (2 * i + 1) / boundary_points));
    }
    out.push_back(std::move(pt));
  }
  return out;
}

Vec unit_defect(const TruncatedHardy& th, const Mat& frame, double* residual) {
  const Mat prod = defect_product(th, frame);
  Eigen::JacobiSVD<Mat> svd(prod, Eigen::ComputeThinU);
  const RealVec& s = svd.singularValues();
  if (s.size() == 0 || s(0) < 0.5) throw error(errc::not_rank_one, "defect product vanishes on the window");
  const double ratio = s.size() > 1 ? s(1) / s(0) : 0.0;
  if (residual != nullptr) *residual = ratio;
  if (numerical_rank(prod) != 1) {
    throw error(errc::not_rank_one, "defect product has rank " + std::to_string(numerical_rank(prod)));
  }
  return frame * svd.matrixU().col(0);
}

}  // namespace

TruncatedHardy::TruncatedHardy(int num_vars, int degree_cap) : num_vars_(num_vars), degree_cap_(degree_cap) {
  if (num_vars < 1 || degree_cap < 1) throw error(errc::precondition, "need num_vars >= 1 and degree_cap >= 1");
  std::int64_t d = 1;
  for (int i = 0; i < num_vars; ++i) d *= degree_cap + 1;
  if (d > max_total_dim) throw error(errc::size_budget_exceeded, "truncated Hardy space is too large");
  dim_ = static_cast<int>(d);
}

Mat TruncatedHardy::shift() const {
  Mat z = Mat::Zero(degree_cap_ + 1, degree_cap_ + 1);
  for (int k = 0; k < degree_cap_; ++k) z(k + 1, k) = 1.0;
  return z;
}

Mat TruncatedHardy::apply(int i, const Mat& x) const {
  return apply_on_slot(slot_dims(), static_cast<std::size_t>(i), shift(), x);
}

int InnerGenerator::max_degree() const {
  int d = 0;
  for (const auto& b : per_var) d = std::max(d, b.degree());
  return d;
}

bool InnerGenerator::is_constant() const {
  return std::all_of(per_var.begin(), per_var.end(), [](const BlaschkeProduct& b) { return b.is_constant(); });
}

bool InnerGenerator::equivalent(const InnerGenerator& other, double tol) const {
  if (per_var.size() != other.per_var.size()) return false;
  for (std::size_t i = 0; i < per_var.size(); ++i) {
    if (!equal_up_to_unimodular(per_var[i], other.per_var[i], tol)) return false;
  }
  return true;
}

cplx InnerGenerator::operator()(std::span<const cplx> z) const {
  if (z.size() != per_var.size()) throw error(errc::precondition, "one point coordinate per variable");
  cplx v = 1.0;
  for (std::size_t i = 0; i < per_var.size(); ++i) v *= per_var[i](z[i]);
  return v;
}

std::string InnerGenerator::to_string() const {
  if (per_var.size() == 1) return per_var[0].to_string();
  std::string out;
  for (std::size_t i = 0; i < per_var.size(); ++i) {
    if (i > 0) out += " ⊗ ";
    out += per_var[i].to_string();
  }
  return out;
}

MixedSpace::MixedSpace(TruncatedHardy hardy, JordanBlockProduct jordan)
    : hardy_(std::move(hardy)), jordan_(std::move(jordan)) {
  if (jordan_.aux_dim() != 0) throw error(errc::precondition, "the model part cannot carry an auxiliary slot");
  if (static_cast<std::int64_t>(hardy_.dim()) * jordan_.total_dim() > max_total_dim) {
    throw error(errc::size_budget_exceeded, "mixed ambient dimension exceeds " + std::to_string(max_total_dim));
  }
  slot_dims_ = hardy_.slot_dims();
  for (const auto& f : jordan_.factors()) slot_dims_.push_back(f.dim());
}

Mat MixedSpace::apply_t(int i, const Mat& x) const {
  return apply_on_slot(slot_dims_, static_cast<std::size_t>(i), hardy_.shift(), x);
}

Mat MixedSpace::apply_t_adjoint(int i, const Mat& x) const {
  return apply_on_slot(slot_dims_, static_cast<std::size_t>(i), hardy_.shift().adjoint(), x);
}

Mat MixedSpace::apply_s(int j, const Mat& x) const {
  return apply_on_slot(slot_dims_, static_cast<std::size_t>(hardy_.num_vars() + j), jordan_.shift(j), x);
}

Mat MixedSpace::apply_s_adjoint(int j, const Mat& x) const {
  return apply_on_slot(slot_dims_, static_cast<std::size_t>(hardy_.num_vars() + j), jordan_.shift(j).adjoint(), x);
}

Subspace build_inner_submodule(const TruncatedHardy& th, const InnerGenerator& phi) {
  if (static_cast<int>(phi.per_var.size()) != th.num_vars()) {
    throw error(errc::precondition, "generator needs one factor per Hardy variable");
  }
  const int n = th.degree_cap();
  std::vector<Subspace> parts;
  for (int i = 0; i < th.num_vars(); ++i) {
    const int d = phi.degree(i);
    if (2 * d > n) {
      throw error(errc::degree_budget, "generator degree " + std::to_string(d) + " exceeds half the degree cap " +
                                           std::to_string(n));
    }
    const auto c = phi.per_var[static_cast<std::size_t>(i)].taylor(n + 1);
    Mat cols = Mat::Zero(n + 1, n - d + 1);
    for (int k = 0; k <= n - d; ++k) {
      for (int j = 0; j + k <= n; ++j) cols(j + k, k) = c[static_cast<std::size_t>(j)];
    }
    parts.push_back(Subspace::span(cols));
  }
  return tensor(std::span<const Subspace>(parts));
}

BeurlingResult beurling_extract(const TruncatedHardy& th, const Subspace& s) {
  if (s.ambient_dim() != th.dim()) throw error(errc::precondition, "subspace does not live in the truncated space");
  if (s.is_zero()) throw error(errc::precondition, "generator extraction needs a nonzero subspace");
  const auto dims = th.slot_dims();

  std::vector<Subspace> per_var;
  for (int i = 0; i < th.num_vars(); ++i) {
    if (th.num_vars() == 1) {
      per_var.push_back(s);
    } else {
      per_var.push_back(Subspace::span(partial_gram(dims, static_cast<std::size_t>(i), s.frame())));
    }
  }
  if (th.num_vars() > 1 && tensor(std::span<const Subspace>(per_var)).distance(s) >= separability_tolerance) {
    throw error(errc::not_rank_one, "subspace is not a product over the Hardy variables");
  }
  int max_deg = 0;
  for (const auto& p : per_var) max_deg = std::max(max_deg, th.degree_cap() + 1 - static_cast<int>(p.dim()));
  if (th.degree_cap() < 2 * max_deg + 2) {
    throw error(errc::truncation_inconclusive, "degree cap " + std::to_string(th.degree_cap()) +
                                                   " is below 2 * " + std::to_string(max_deg) + " + 2");
  }

  BeurlingResult out;
  out.defect_vector = unit_defect(th, s.frame(), &out.rank_one_residual);

  for (const auto& p : per_var) out.generator.per_var.push_back(generator_from_annihilator(p.frame(), th.degree_cap()));
  const Subspace rebuilt = build_inner_submodule(th, out.generator);
  out.reconstruction_residual = rebuilt.distance(s);
  if (out.reconstruction_residual >= window_tolerance) {
    throw error(errc::not_rank_one, "no separable inner generator reproduces the subspace (residual " +
                                        std::to_string(out.reconstruction_residual) + ")");
  }

  const Vec reference = unit_defect(th, rebuilt.frame(), nullptr);
  const cplx overlap = reference.dot(out.defect_vector);
  const cplx phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : cplx(1.0);
  for (const auto& pt : boundary_grid(th.num_vars())) {
    const cplx a = evaluate_polynomial(dims, out.defect_vector, pt);
    const cplx b = phase * evaluate_polynomial(dims, reference, pt);
    out.boundary_residual = std::max(out.boundary_residual, std::abs(a - b));
  }
  return out;
}

MixedCheck check_mixed(const MixedSpace& msp, const Subspace& m) {
  if (m.ambient_dim() != msp.ambient_dim()) throw error(errc::precondition, "subspace ambient dimension mismatch");
  MixedCheck out;
  if (m.is_zero()) return out;
  const Mat& f = m.frame();
  const int hv = msp.hardy().num_vars();
  const int r = msp.jordan().coordinates();
  auto project = [&f](const Mat& x) -> Mat { return f * (f.adjoint() * x); };

  for (int j = 0; j < r; ++j) out.s_invariance = std::max(out.s_invariance, excess(f, msp.apply_s(j, f)));
  std::vector<Mat> images;
  for (int i = 0; i < hv; ++i) images.push_back(msp.apply_t(i, f));
  const Mat win = window_of(f, images);
  out.window_dim = static_cast<int>(win.cols());
  out.window_codim = static_cast<int>(f.cols() - win.cols());
  if (!out.submodule()) return out;

  // Doubly commuting relations among the compressions, on the window where T acts exactly.
  double dc = 0.0;
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      if (i == j) continue;
      const Mat lhs = project(msp.apply_s(i, project(msp.apply_s_adjoint(j, f))));
      const Mat rhs = project(msp.apply_s_adjoint(j, msp.apply_s(i, f)));
      dc = std::max(dc, spectral_norm(lhs - rhs));
    }
  }
  for (int i = 0; i < hv && win.cols() > 0; ++i) {
    for (int j = 0; j < r; ++j) {
      const Mat a1 = project(msp.apply_t(i, project(msp.apply_s_adjoint(j, win))));
      const Mat b1 = project(msp.apply_s_adjoint(j, msp.apply_t(i, win)));
      const Mat a2 = project(msp.apply_t(i, msp.apply_s(j, win)));
      const Mat b2 = msp.apply_s(j, msp.apply_t(i, win));
      dc = std::max({dc, spectral_norm(a1 - b1), spectral_norm(a2 - b2)});
    }
    for (int k = 0; k < hv; ++k) {
      if (k == i) continue;
      const Mat lhs = project(msp.apply_t_adjoint(i, msp.apply_t(k, win)));
      const Mat rhs = project(msp.apply_t(k, project(msp.apply_t_adjoint(i, win))));
      dc = std::max(dc, spectral_norm(lhs - rhs));
    }
  }
  out.doubly_commuting_residual = dc;
  return out;
}

MixedDecomposition decompose_mixed(const MixedSpace& msp, const Subspace& m) {
  if (m.ambient_dim() != msp.ambient_dim()) throw error(errc::precondition, "subspace ambient dimension mismatch");
  if (m.is_zero()) throw error(errc::precondition, "decomposition needs a nonzero submodule");
  const Mat& f = m.frame();
  const int hv = msp.hardy().num_vars();
  const int r = msp.jordan().coordinates();

  const MixedCheck check = check_mixed(msp, m);
  if (!check.submodule()) {
    throw error(errc::not_a_submodule,
                "subspace is not invariant under S (residual " + std::to_string(check.s_invariance) + ")");
  }
  if (!check.window_adequate()) {
    throw error(errc::truncation_inconclusive, "window of codimension " + std::to_string(check.window_codim) +
                                                   " leaves too little of a " + std::to_string(f.cols()) +
                                                   "-dimensional subspace");
  }
  if (!check.doubly_commuting()) {
    throw error(errc::not_doubly_commuting, "commutator residual " + std::to_string(check.doubly_commuting_residual));
  }
  MixedDecomposition out;
  out.window_codim = check.window_codim;
  out.doubly_commuting_residual = check.doubly_commuting_residual;

  // M_1 = star closure over the model coordinates = W ⊗ Q_Theta; the Hardy slots act as H.
  std::vector<std::pair<std::size_t, const Mat*>> ops;
  for (int j = 0; j < r; ++j) ops.emplace_back(static_cast<std::size_t>(hv + j), &msp.jordan().shift(j));
  const Mat m1 = slot_star_closure(msp.slot_dims(), ops, f);
  std::vector<int> combined{msp.hardy().dim()};
  std::vector<const ModelSpace*> factors;
  for (const auto& fac : msp.jordan().factors()) {
    combined.push_back(fac.dim());
    factors.push_back(&fac);
  }
  const Mat hardy_frame = split_leading_slot(combined, factors, m1);
  if (hardy_frame.cols() == 0) throw error(errc::reconstruction_mismatch, "empty Hardy factor");
  out.hardy_part = Subspace::from_orthonormal(hardy_frame);

  const Subspace e = Subspace::span(contract_slot(combined, 0, hardy_frame.col(0), f));
  out.hardy = beurling_extract(msp.hardy(), out.hardy_part);
  out.factors = decompose_doubly_commuting(msp.jordan(), e);

  std::vector<Subspace> parts;
  for (const auto& cf : out.factors) parts.push_back(cf.w);
  const Mat rebuilt =
      kron(build_inner_submodule(msp.hardy(), out.hardy.generator).frame(), tensor_submodule(parts).frame());
  out.reconstruction_residual = subspace_distance(rebuilt, f);
  if (out.reconstruction_residual >= window_tolerance) {
    throw error(errc::reconstruction_mismatch, "phi H^2 ⊗ W differs from M by " +
                                                   std::to_string(out.reconstruction_residual));
  }
  return out;
}

Subspace mixed_submodule(const MixedSpace& msp, const InnerGenerator& phi, const std::vector<Factorization>& fs) {
  const Subspace hardy = build_inner_submodule(msp.hardy(), phi);
  const Subspace model = tensor_submodule(msp.jordan(), fs);
  return Subspace::from_orthonormal(kron(hardy.frame(), model.frame()));
}

}  // namespace pjb
