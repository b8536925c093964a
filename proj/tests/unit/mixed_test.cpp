#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>

#include <pjb/errors.hpp>
#include <pjb/mixed.hpp>

using namespace pjb;

namespace {

const BlaschkeProduct one;
const BlaschkeProduct z1 = BlaschkeProduct::monomial(1);
const BlaschkeProduct z2 = BlaschkeProduct::monomial(2);

Subspace monomial_span(int n, int from, int to) {
  Mat f = Mat::Zero(n, to - from + 1);
  for (int k = from; k <= to; ++k) f(k, k - from) = 1.0;
  return Subspace::span(f);
}

// Taylor coefficients of phi * z^k truncated at degree N, from the exact series.
Vec shifted_series(const BlaschkeProduct& phi, int k, int n) {
  const auto c = phi.taylor(n + 1);
  Vec v = Vec::Zero(n + 1);
  for (int j = 0; j + k <= n; ++j) v(j + k) = c[static_cast<std::size_t>(j)];
  return v;
}

bool same(const Factorization& a, const Factorization& b) {
  return equal_up_to_unimodular(a.left, b.left) && equal_up_to_unimodular(a.right, b.right);
}

}  // namespace

TEST_CASE("inner submodules of the truncated Hardy space") {
  const TruncatedHardy h4(1, 4);
  CHECK(build_inner_submodule(h4, InnerGenerator{{z1}}).distance(monomial_span(5, 1, 4)) < 1e-12);

  const TruncatedHardy h2(2, 3);
  const Subspace zz = build_inner_submodule(h2, InnerGenerator{{z1, z1}});
  Mat f = Mat::Zero(16, 9);
  int c = 0;
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) f(4 * i + j, c++) = 1.0;
  }
  CHECK(zz.distance(Subspace::span(f)) < 1e-12);

  const TruncatedHardy h6(1, 6);
  const BlaschkeProduct b = BlaschkeProduct::factor(0.5);
  const Subspace s = build_inner_submodule(h6, InnerGenerator{{b}});
  CHECK(s.dim() == 6);
  for (int k = 0; k < 3; ++k) {
    const Vec v = shifted_series(b, k, 6);
    CHECK((v - s.project(v)).norm() < 1e-10);
  }
  CHECK_THROWS_AS(build_inner_submodule(TruncatedHardy(1, 3), InnerGenerator{{z2}}), error);
}

TEST_CASE("Beurling generators are recovered") {
  const TruncatedHardy h6(1, 6);
  const BeurlingResult r = beurling_extract(h6, build_inner_submodule(h6, InnerGenerator{{z1}}));
  CHECK(r.generator.equivalent(InnerGenerator{{z1}}));
  CHECK(r.reconstruction_residual < 1e-8);

  CHECK(beurling_extract(h6, Subspace::full(7)).generator.is_constant());

  const TruncatedHardy h10(1, 10);
  const BlaschkeProduct b = BlaschkeProduct::factor(0.5);
  const BeurlingResult rb = beurling_extract(h10, build_inner_submodule(h10, InnerGenerator{{b}}));
  CHECK(rb.generator.equivalent(InnerGenerator{{b}}, 1e-6));
  CHECK(rb.boundary_residual < 1e-6);
  const cplx phase = rb.generator.per_var[0](1.0) / b(1.0);
  for (int k = 0; k < 16; ++k) {
    const std::array<cplx, 1> w{std::polar(1.0, 2.0 * std::numbers::pi * k / 16)};
    CHECK(std::abs(rb.generator(w) - phase * b(w[0])) < 1e-6);
  }
}

TEST_CASE("Nakazi submodules of H^2 x Q_{z^2}") {
  const MixedSpace msp(TruncatedHardy(1, 6), JordanBlockProduct({ModelSpace(z2)}));
  const Subspace m = mixed_submodule(msp, InnerGenerator{{z1}}, {{z1, z1}});
  const MixedCheck chk = check_mixed(msp, m);
  CHECK(chk.submodule());
  CHECK(chk.window_adequate());
  CHECK(chk.doubly_commuting());
  const MixedDecomposition d = decompose_mixed(msp, m);
  CHECK(d.hardy.generator.equivalent(InnerGenerator{{z1}}));
  REQUIRE(d.factors.size() == 1);
  CHECK(same(d.factors[0].factorization, {z1, z1}));

  const MixedDecomposition full = decompose_mixed(msp, Subspace::full(msp.ambient_dim()));
  CHECK(full.hardy.generator.is_constant());
  CHECK(same(full.factors[0].factorization, {one, z2}));
}

TEST_CASE("Blaschke generator in the mixed space") {
  const MixedSpace msp(TruncatedHardy(1, 10), JordanBlockProduct({ModelSpace(z2)}));
  const BlaschkeProduct b = BlaschkeProduct::factor(0.5);
  const MixedDecomposition d = decompose_mixed(msp, mixed_submodule(msp, InnerGenerator{{b}}, {{one, z2}}));
  CHECK(d.hardy.generator.equivalent(InnerGenerator{{b}}, 1e-6));
  CHECK(same(d.factors[0].factorization, {one, z2}));
  CHECK(d.reconstruction_residual < 1e-6);
}

TEST_CASE("mixed subspaces that are not doubly commuting are rejected") {
  const MixedSpace msp(TruncatedHardy(1, 6), JordanBlockProduct({ModelSpace(z2)}));
  const Subspace shifted = mixed_submodule(msp, InnerGenerator{{z1}}, {{one, z2}});
  const Subspace fixed = mixed_submodule(msp, InnerGenerator{{one}}, {{z1, z1}});
  Mat both(msp.ambient_dim(), shifted.dim() + fixed.dim());
  both << shifted.frame(), fixed.frame();
  const Subspace m = Subspace::span(both);
  const MixedCheck chk = check_mixed(msp, m);
  CHECK(chk.submodule());
  CHECK_FALSE(chk.doubly_commuting());
  CHECK_THROWS_AS(decompose_mixed(msp, m), error);
}
