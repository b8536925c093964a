#include <pjb/model_space.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include <pjb/errors.hpp>

namespace pjb {

namespace {

int initial_node_count(const BlaschkeProduct& theta, const QuadratureOptions& opts) {
  const double r = theta.max_zero_modulus();
  int k = std::max(opts.min_nodes, 1);
  // round up to a power of two
  int p = 1;
  while (p < k) p <<= 1;
  k = p;
  if (r > 0.0) {
    while (k < opts.max_nodes && std::pow(r, k) >= opts.decay_target) k <<= 1;
  }
  return k;
}

}  // namespace

ModelSpace::ModelSpace(BlaschkeProduct theta, QuadratureOptions opts) : theta_(std::move(theta)) {
  if (theta_.degree() < 1) throw error(errc::precondition, "model space needs a nonconstant inner function");
  int k = initial_node_count(theta_, opts);
  sample(k);
  while (gram_residual() > opts.gram_tolerance) {
    if (k >= opts.max_nodes) {
      throw error(errc::ill_conditioned, "Gram residual of the Takenaka-Malmquist basis stays above tolerance");
    }
    k <<= 1;
    sample(k);
  }
}

void ModelSpace::sample(int k) {
  nodes_.resize(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) nodes_[static_cast<std::size_t>(i)] = std::polar(1.0, 2.0 * std::numbers::pi * i / k);
  samples_.resize(k, dim());
  theta_samples_.resize(k);
  for (int i = 0; i < k; ++i) {
    const cplx w = nodes_[static_cast<std::size_t>(i)];
    samples_.row(i) = basis_at(w).transpose();
    theta_samples_(i) = theta_(w);
  }
}

Vec ModelSpace::basis_at(cplx z) const {
  const auto& zs = theta_.zeros();
  Vec out(dim());
  cplx prefix = 1.0;
  for (int k = 0; k < dim(); ++k) {
    const cplx a = zs[static_cast<std::size_t>(k)];
    const cplx den = 1.0 - std::conj(a) * z;
    if (std::abs(den) < 1e-13) throw error(errc::pole_proximity, "basis evaluation near a pole");
    out(k) = std::sqrt(1.0 - std::norm(a)) / den * prefix;
    prefix *= (z - a) / den;
  }
  return out;
}

Vec ModelSpace::evaluate(const Mat& coords, cplx z) const { return coords.transpose() * basis_at(z); }

Mat ModelSpace::to_samples(const Mat& coords) const { return samples_ * coords; }

Mat ModelSpace::project_samples(const Mat& samples) const {
  return samples_.adjoint() * samples / static_cast<double>(node_count());
}

double ModelSpace::membership_residual(const Vec& samples) const {
  const Vec rest = samples - to_samples(project_samples(samples));
  return rest.norm() / std::sqrt(static_cast<double>(node_count()));
}

cplx ModelSpace::inner(const Vec& f, const Vec& g) const {
  return g.dot(f) / static_cast<double>(node_count());  // Eigen dot is conjugate-linear in the left operand
}

cplx ModelSpace::mean(const Vec& samples) const { return samples.mean(); }

double ModelSpace::gram_residual() const {
  const Mat gram = samples_.adjoint() * samples_ / static_cast<double>(node_count());
  return (gram - Mat::Identity(dim(), dim())).cwiseAbs().maxCoeff();
}

Mat ModelSpace::taylor_at(const Mat& coords, cplx a, int order, double radius) const {
  constexpr int nodes = 64;
  Mat values(nodes, coords.cols());
  std::vector<cplx> offsets(nodes);
  for (int k = 0; k < nodes; ++k) {
    offsets[static_cast<std::size_t>(k)] = std::polar(radius, 2.0 * std::numbers::pi * k / nodes);
    values.row(k) = evaluate(coords, a + offsets[static_cast<std::size_t>(k)]).transpose();
  }
  Mat out(order, coords.cols());
  for (int j = 0; j < order; ++j) {
    Vec weights(nodes);
    for (int k = 0; k < nodes; ++k) weights(k) = std::pow(offsets[static_cast<std::size_t>(k)], -j) / double(nodes);
    out.row(j) = weights.transpose() * values;
  }
  return out;
}

Mat compressed_shift(const ModelSpace& ms) {
  Mat shifted = ms.basis_samples();
  for (int i = 0; i < ms.node_count(); ++i) shifted.row(i) *= ms.nodes()[static_cast<std::size_t>(i)];
  return ms.project_samples(shifted);
}

std::vector<ModelVector> backward_shift_sequence(const ModelSpace& ms, int count) {
  std::vector<ModelVector> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  Vec g = ms.theta_samples();
  for (int m = 1; m <= count; ++m) {
    const cplx head = ms.mean(g);
    for (int i = 0; i < ms.node_count(); ++i) g(i) = (g(i) - head) / ms.nodes()[static_cast<std::size_t>(i)];
    ModelVector v;
    v.coords = ms.project_samples(g);
    v.membership_residual = ms.membership_residual(g);
    out.push_back(std::move(v));
  }
  return out;
}

ModelVector backward_shift_theta(const ModelSpace& ms, int m) {
  if (m < 1) throw error(errc::precondition, "backward shift power must be positive");
  return backward_shift_sequence(ms, m).back();
}

ProjectOne project_one(const ModelSpace& ms) {
  const cplx theta0 = ms.theta()(0.0);
  const Vec samples = Vec::Ones(ms.node_count()) - std::conj(theta0) * ms.theta_samples();
  ProjectOne out;
  out.coords = ms.project_samples(samples);
  const Vec direct = ms.basis_at(0.0).conjugate();
  out.direct_residual = (out.coords - direct).norm();
  const Vec rest = Vec::Ones(ms.node_count()) - ms.to_samples(out.coords);
  out.orthogonality_residual = ms.project_samples(rest).cwiseAbs().maxCoeff();
  return out;
}

DefectResiduals defect_identities(const ModelSpace& ms) {
  const Mat s = compressed_shift(ms);
  const Mat id = Mat::Identity(ms.dim(), ms.dim());
  const Vec v = project_one(ms).coords;
  const Vec w = backward_shift_theta(ms, 1).coords;
  DefectResiduals out;
  out.residual_ss = (id - s * s.adjoint() - v * v.adjoint()).norm();
  out.residual_s_s = (id - s.adjoint() * s - w * w.adjoint()).norm();
  return out;
}

int parseval_minimal_tail(const ModelSpace& ms) {
  const double r = ms.theta().max_zero_modulus();
  if (r == 0.0) return ms.dim();
  return std::max(ms.dim(), static_cast<int>(std::floor(std::log(1e-12) / (2.0 * std::log(r)))) + 1);
}

double parseval_frame_residual(const ModelSpace& ms, int tail) {
  const double r = ms.theta().max_zero_modulus();
  if (tail < 1 || std::pow(r, 2.0 * tail) >= 1e-12) {
    throw error(errc::tail_too_short, "frame tail " + std::to_string(tail) + " does not meet the decay bound");
  }
  Mat acc = Mat::Identity(ms.dim(), ms.dim());
  for (const auto& w : backward_shift_sequence(ms, tail)) acc -= w.coords * w.coords.adjoint();
  return acc.norm();
}

Mat krylov_block(const Mat& a, const Mat& x, int count) {
  Mat out(x.rows(), x.cols() * count);
  Mat cur = x;
  for (int p = 0; p < count; ++p) {
    out.middleCols(p * x.cols(), x.cols()) = cur;
    cur = a * cur;
  }
  return out;
}

bool star_cyclicity_check(const ModelSpace& ms) {
  const Mat s_star = compressed_shift(ms).adjoint();
  const Vec w = backward_shift_theta(ms, 1).coords;
  return numerical_rank(krylov_block(s_star, w, ms.dim())) == ms.dim();
}

}  // namespace pjb
