#include <doctest.h>

#include <cmath>
#include <numbers>

#include <pjb/errors.hpp>
#include <pjb/model_space.hpp>

using namespace pjb;

namespace {

// Gram matrix of the basis functions by an independent trapezoid rule on a finer grid.
Mat gram_by_evaluation(const ModelSpace& ms, int nodes) {
  const Mat id = Mat::Identity(ms.dim(), ms.dim());
  Mat g = Mat::Zero(ms.dim(), ms.dim());
  for (int k = 0; k < nodes; ++k) {
    const Vec v = ms.evaluate(id, std::polar(1.0, 2.0 * std::numbers::pi * k / nodes));
    g += v.conjugate() * v.transpose();
  }
  return g / static_cast<double>(nodes);
}

Mat lower_shift(int d) {
  Mat s = Mat::Zero(d, d);
  for (int j = 0; j + 1 < d; ++j) s(j + 1, j) = 1.0;
  return s;
}

}  // namespace

TEST_CASE("z^3 has the monomial basis") {
  const ModelSpace ms(BlaschkeProduct::monomial(3));
  CHECK(ms.dim() == 3);
  const cplx z(0.3, -0.2);
  const Vec b = ms.basis_at(z);
  CHECK(std::abs(b(0) - 1.0) < 1e-14);
  CHECK(std::abs(b(1) - z) < 1e-14);
  CHECK(std::abs(b(2) - z * z) < 1e-14);
}

TEST_CASE("a single zero gives the normalized Cauchy kernel") {
  const ModelSpace ms(BlaschkeProduct::factor(0.5));
  CHECK(ms.dim() == 1);
  for (const cplx z : {cplx(0.0), cplx(0.4, 0.3), std::polar(1.0, 1.0)}) {
    CHECK(std::abs(ms.basis_at(z)(0) - std::sqrt(0.75) / (1.0 - 0.5 * z)) < 1e-13);
  }
}

TEST_CASE("basis stays orthonormal with repeated and scattered zeros") {
  for (const auto& theta : {BlaschkeProduct(1.0, {0.5, 0.5}), random_blaschke(5, 0.9, 17)}) {
    const ModelSpace ms(theta);
    const Mat g = gram_by_evaluation(ms, 8192);
    CHECK((g - Mat::Identity(ms.dim(), ms.dim())).norm() < 1e-10);
  }
}

TEST_CASE("compressed shift examples") {
  for (int d = 1; d <= 4; ++d) {
    const Mat s = compressed_shift(ModelSpace(BlaschkeProduct::monomial(d)));
    CHECK((s - lower_shift(d)).norm() < 1e-12);
  }
  const cplx a(0.3, 0.4);
  const Mat s = compressed_shift(ModelSpace(BlaschkeProduct::factor(a)));
  CHECK(std::abs(s(0, 0) - a) < 1e-12);

  const Mat s4 = compressed_shift(ModelSpace(random_blaschke(4, 0.9, 5)));
  CHECK(numerical_rank(Mat::Identity(4, 4) - s4.adjoint() * s4, 1e-9) == 1);
}

TEST_CASE("backward shifts of theta") {
  const ModelVector w = backward_shift_theta(ModelSpace(BlaschkeProduct::monomial(2)), 1);
  CHECK((w.coords - Vec::Unit(2, 1)).norm() < 1e-12);

  const ModelVector h = backward_shift_theta(ModelSpace(BlaschkeProduct::factor(0.5)), 1);
  CHECK(std::abs(h.coords.squaredNorm() - 0.75) < 1e-12);

  const ModelSpace z3(BlaschkeProduct::monomial(3));
  const Vec t1 = backward_shift_theta(z3, 1).coords;
  const Vec t2 = backward_shift_theta(z3, 2).coords;
  CHECK((t2 - Vec::Unit(3, 1)).norm() < 1e-12);
  CHECK((compressed_shift(z3).adjoint() * t1 - t2).norm() < 1e-12);
  CHECK(backward_shift_theta(z3, 2).membership_residual < 1e-12);
}

TEST_CASE("projection of the constant function") {
  const ProjectOne p = project_one(ModelSpace(BlaschkeProduct::monomial(3)));
  CHECK((p.coords - Vec::Unit(3, 0)).norm() < 1e-12);

  const ModelSpace ms(BlaschkeProduct::factor(0.5));
  const ProjectOne q = project_one(ms);
  CHECK(std::abs(q.coords.squaredNorm() - 0.75) < 1e-12);
  const cplx z(0.2, 0.6);
  CHECK(std::abs(ms.evaluate(q.coords, z)(0) - (1.0 + ms.theta()(z) / 2.0)) < 1e-12);
  CHECK(q.direct_residual < 1e-10);
  CHECK(q.orthogonality_residual < 1e-10);
}

TEST_CASE("defect operators are rank one") {
  const DefectResiduals one = defect_identities(ModelSpace(BlaschkeProduct::monomial(1)));
  CHECK(one.residual_ss < 1e-14);
  CHECK(one.residual_s_s < 1e-14);
  const DefectResiduals r = defect_identities(ModelSpace(random_blaschke(5, 0.9, 99)));
  CHECK(r.residual_ss < 1e-9);
  CHECK(r.residual_s_s < 1e-9);
}

TEST_CASE("Parseval frame from backward shifts") {
  CHECK(parseval_frame_residual(ModelSpace(BlaschkeProduct::monomial(3)), 3) < 1e-12);
  CHECK(parseval_frame_residual(ModelSpace(BlaschkeProduct::factor(0.5)), 40) < 1e-8);
  CHECK(parseval_frame_residual(ModelSpace(random_blaschke(3, 0.8, 4)), 120) < 1e-8);
  CHECK_THROWS_AS(parseval_frame_residual(ModelSpace(BlaschkeProduct::factor(0.9)), 10), error);
}

TEST_CASE("star cyclicity of T_z^* theta") {
  CHECK(star_cyclicity_check(ModelSpace(BlaschkeProduct::monomial(3))));
  CHECK(star_cyclicity_check(ModelSpace(BlaschkeProduct::factor(0.5))));
  CHECK(star_cyclicity_check(ModelSpace(random_blaschke(6, 0.9, 8))));
}

TEST_CASE("constant theta has no model space") {
  const BlaschkeProduct constant;
  CHECK_THROWS_AS(ModelSpace{constant}, error);
}
