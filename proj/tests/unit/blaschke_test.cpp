#include <doctest.h>

#include <cmath>
#include <numbers>

#include <pjb/blaschke.hpp>
#include <pjb/errors.hpp>

using namespace pjb;

namespace {

cplx factor_value(cplx a, cplx z) { return (z - a) / (1.0 - std::conj(a) * z); }

}  // namespace

TEST_CASE("evaluation follows the factor convention") {
  CHECK(std::abs(BlaschkeProduct::monomial(1)(0.0)) == 0.0);
  const auto b = BlaschkeProduct::factor(0.5);
  CHECK(std::abs(b(0.0) - cplx(-0.5)) < 1e-15);
  const cplx w = std::polar(1.0, std::numbers::pi / 3);
  CHECK(std::abs(std::abs(b(w)) - 1.0) < 1e-12);
}

TEST_CASE("multiplication agrees with pointwise products") {
  const auto z2 = BlaschkeProduct::factor(0.0) * BlaschkeProduct::factor(0.0);
  CHECK(z2.degree() == 2);
  CHECK(equal_up_to_unimodular(z2, BlaschkeProduct::monomial(2)));

  const auto theta = BlaschkeProduct::factor(0.5) * BlaschkeProduct::factor(-1.0 / 3.0);
  CHECK(theta.degree() == 2);
  for (int k = 0; k < 10; ++k) {
    const cplx w = std::polar(1.0, 0.7 * k + 0.1);
    CHECK(std::abs(theta(w) - factor_value(0.5, w) * factor_value(-1.0 / 3.0, w)) < 1e-12);
  }
  CHECK(equal_up_to_unimodular(BlaschkeProduct() * theta, theta));
}

TEST_CASE("factorizations enumerate zero sub-multisets") {
  const auto z2 = BlaschkeProduct::monomial(2);
  const auto fs = factorizations(z2);
  REQUIRE(fs.size() == 3);
  CHECK(fs[0].left.degree() == 0);
  CHECK(fs[0].right.degree() == 2);
  CHECK(fs[1].left.degree() == 1);
  CHECK(fs[2].left.degree() == 2);
  CHECK(fs[2].right.is_constant());

  CHECK(factorizations(BlaschkeProduct()).size() == 1);
  CHECK(factorizations(BlaschkeProduct::factor(0.5) * BlaschkeProduct::factor(-1.0 / 3.0)).size() == 4);
  for (const auto& f : factorizations(random_blaschke(5, 0.9, 3))) {
    CHECK(f.left.constant() == cplx(1.0));
  }
}

TEST_CASE("comparison ignores the unimodular constant and zero order") {
  const auto z2 = BlaschkeProduct::monomial(2);
  CHECK(equal_up_to_unimodular(z2, z2.with_constant(std::polar(1.0, std::numbers::pi))));
  CHECK_FALSE(equal_up_to_unimodular(z2, BlaschkeProduct::monomial(1)));
  const BlaschkeProduct ab(1.0, {0.5, -1.0 / 3.0});
  const BlaschkeProduct ba(1.0, {-1.0 / 3.0, 0.5});
  CHECK(equal_up_to_unimodular(ab, ba));
}

TEST_CASE("invalid products are rejected") {
  CHECK_THROWS_AS(BlaschkeProduct(2.0, {0.1}), error);
  CHECK_THROWS_AS(BlaschkeProduct(1.0, {0.99}), error);
  CHECK_NOTHROW(BlaschkeProduct(1.0, {0.99}, 0.995));
}

TEST_CASE("taylor coefficients match the geometric expansion") {
  const auto c = BlaschkeProduct::factor(0.5).taylor(6);
  CHECK(std::abs(c[0] + 0.5) < 1e-15);
  for (int k = 1; k < 6; ++k) {
    CHECK(std::abs(c[k] - 0.75 * std::pow(0.5, k - 1)) < 1e-15);
  }
}

TEST_CASE("canonical zeros and formatting") {
  const auto zs = canonical_zeros({cplx(0.5, 0.0), cplx(-0.2, 0.1), cplx(-0.2, -0.1)});
  REQUIRE(zs.size() == 3);
  CHECK(zs[0] == cplx(-0.2, -0.1));
  CHECK(zs[2] == cplx(0.5, 0.0));
  CHECK(format_complex(cplx(0.5, 0.0)) == "0.5");
  CHECK(format_complex(cplx(-0.3, 0.2)) == "-0.3+0.2i");
  CHECK(BlaschkeProduct::monomial(2).to_string() == "z^2");
}
