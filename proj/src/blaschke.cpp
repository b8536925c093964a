#include <pjb/blaschke.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>

#include <pjb/errors.hpp>

namespace pjb {

namespace {

constexpr double unimodular_tolerance = 1e-12;
constexpr double pole_tolerance = 1e-13;

bool lex_less(cplx a, cplx b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

}  // namespace

std::string format_complex(cplx c) {
  char buf[96];
  const double re = std::abs(c.real()) < 1e-15 ? 0.0 : c.real();
  const double im = std::abs(c.imag()) < 1e-15 ? 0.0 : c.imag();
  if (im == 0.0) {
    std::snprintf(buf, sizeof buf, "%.6g", re);
  } else if (re == 0.0) {
    std::snprintf(buf, sizeof buf, "%.6gi", im);
  } else {
    std::snprintf(buf, sizeof buf, "%.6g%+.6gi", re, im);
  }
  return buf;
}

BlaschkeProduct::BlaschkeProduct(cplx constant, std::vector<cplx> zeros, double guard)
    : constant_(constant), zeros_(std::move(zeros)), guard_(guard) {
  if (!(guard_ > 0.0 && guard_ < 1.0)) throw error(errc::precondition, "zero guard must lie in (0, 1)");
  if (std::abs(std::abs(constant_) - 1.0) > unimodular_tolerance) {
    throw error(errc::precondition, "Blaschke constant must be unimodular");
  }
  for (const cplx a : zeros_) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()) || std::abs(a) > guard_) {
      throw error(errc::precondition, "Blaschke zero " + format_complex(a) + " violates |a| <= " +
                                          std::to_string(guard_));
    }
  }
}

BlaschkeProduct BlaschkeProduct::factor(cplx a, double guard) { return BlaschkeProduct(1.0, {a}, guard); }

BlaschkeProduct BlaschkeProduct::monomial(int k) {
  return BlaschkeProduct(1.0, std::vector<cplx>(static_cast<std::size_t>(std::max(k, 0)), cplx(0.0)));
}

double BlaschkeProduct::max_zero_modulus() const noexcept {
  double m = 0.0;
  for (const cplx a : zeros_) m = std::max(m, std::abs(a));
  return m;
}

cplx BlaschkeProduct::operator()(cplx z) const {
  if (std::abs(z) > 1.0 + 1e-9) throw error(errc::precondition, "evaluation point outside the closed disc");
  cplx value = constant_;
  for (const cplx a : zeros_) {
    const cplx den = 1.0 - std::conj(a) * z;
    if (std::abs(den) < pole_tolerance) throw error(errc::pole_proximity, "evaluation point near a pole");
    value *= (z - a) / den;
  }
  return value;
}

std::vector<cplx> BlaschkeProduct::taylor(int count) const {
  std::vector<cplx> series(static_cast<std::size_t>(std::max(count, 0)), cplx(0.0));
  if (count <= 0) return series;
  series[0] = constant_;
  std::vector<cplx> f(series.size());
  std::vector<cplx> next(series.size());
  for (const cplx a : zeros_) {
    // b_a(z) = -a + (1 - |a|^2) sum_{k>=1} conj(a)^{k-1} z^k
    f[0] = -a;
    cplx power = 1.0;
    for (std::size_t k = 1; k < f.size(); ++k) {
      f[k] = (1.0 - std::norm(a)) * power;
      power *= std::conj(a);
    }
    std::fill(next.begin(), next.end(), cplx(0.0));
    for (std::size_t i = 0; i < series.size(); ++i) {
      if (series[i] == cplx(0.0)) continue;
      for (std::size_t j = 0; i + j < series.size(); ++j) next[i + j] += series[i] * f[j];
    }
    series.swap(next);
  }
  return series;
}

BlaschkeProduct BlaschkeProduct::with_constant(cplx c) const { return BlaschkeProduct(c, zeros_, guard_); }

std::string BlaschkeProduct::to_string() const {
  std::string out;
  if (std::abs(constant_ - cplx(1.0)) > 1e-12) out = "(" + format_complex(constant_) + ")";
  int origin = 0;
  std::vector<std::string> parts;
  for (const cplx a : canonical_zeros(zeros_)) {
    if (a == cplx(0.0)) {
      ++origin;
    } else {
      parts.push_back("b(" + format_complex(a) + ")");
    }
  }
  if (origin == 1) parts.insert(parts.begin(), "z");
  if (origin > 1) parts.insert(parts.begin(), "z^" + std::to_string(origin));
  for (const auto& p : parts) {
    if (!out.empty()) out += "*";
    out += p;
  }
  return out.empty() ? "1" : out;
}

BlaschkeProduct multiply(const BlaschkeProduct& b1, const BlaschkeProduct& b2) {
  std::vector<cplx> zeros = b1.zeros();
  zeros.insert(zeros.end(), b2.zeros().begin(), b2.zeros().end());
  cplx c = b1.constant() * b2.constant();
  c /= std::abs(c);
  return BlaschkeProduct(c, std::move(zeros), std::max(b1.guard(), b2.guard()));
}

std::vector<ZeroCluster> distinct_zeros(const BlaschkeProduct& b) {
  std::vector<cplx> zs = b.zeros();
  std::sort(zs.begin(), zs.end(), lex_less);
  std::vector<ZeroCluster> clusters;
  for (const cplx a : zs) {
    auto it = std::find_if(clusters.begin(), clusters.end(), [a](const ZeroCluster& c) {
      return std::abs(c.point - a) <= zero_match_tolerance;
    });
    if (it == clusters.end()) {
      clusters.push_back({a, 1});
    } else {
      ++it->multiplicity;
    }
  }
  std::sort(clusters.begin(), clusters.end(), [](const ZeroCluster& x, const ZeroCluster& y) {
    return lex_less(x.point, y.point);
  });
  return clusters;
}

std::vector<Factorization> factorizations(const BlaschkeProduct& b) {
  if (b.degree() > max_factorization_degree) {
    throw error(errc::degree_too_large, "factorization enumeration is limited to degree " +
                                            std::to_string(max_factorization_degree));
  }
  const auto clusters = distinct_zeros(b);
  // Representatives of each cluster, in the order they occur in b.zeros().
  std::vector<std::vector<cplx>> members(clusters.size());
  for (const cplx a : b.zeros()) {
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      if (std::abs(clusters[c].point - a) <= zero_match_tolerance) {
        members[c].push_back(a);
        break;
      }
    }
  }

  std::vector<Factorization> out;
  std::vector<int> mult(clusters.size(), 0);
  while (true) {
    std::vector<cplx> left;
    std::vector<cplx> right;
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      const auto& m = members[c];
      left.insert(left.end(), m.begin(), m.begin() + mult[c]);
      right.insert(right.end(), m.begin() + mult[c], m.end());
    }
    out.push_back({BlaschkeProduct(1.0, std::move(left), b.guard()),
                   BlaschkeProduct(b.constant(), std::move(right), b.guard())});
    // odometer, last cluster fastest
    std::size_t c = clusters.size();
    while (c > 0) {
      --c;
      if (++mult[c] <= clusters[c].multiplicity) break;
      mult[c] = 0;
      if (c == 0) return out;
    }
    if (clusters.empty()) return out;
  }
}

std::vector<int> optimal_assignment(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  if (n == 0) return {};
  const double inf = std::numeric_limits<double>::infinity();
  // 1-indexed potentials formulation
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> assignment(n, -1);
  for (int j = 1; j <= n; ++j) assignment[p[j] - 1] = j - 1;
  return assignment;
}

bool equal_up_to_unimodular(const BlaschkeProduct& b1, const BlaschkeProduct& b2, double tol) {
  if (b1.degree() != b2.degree()) return false;
  const auto& z1 = b1.zeros();
  const auto& z2 = b2.zeros();
  std::vector<std::vector<double>> cost(z1.size(), std::vector<double>(z2.size()));
  for (std::size_t i = 0; i < z1.size(); ++i) {
    for (std::size_t j = 0; j < z2.size(); ++j) cost[i][j] = std::abs(z1[i] - z2[j]);
  }
  const auto match = optimal_assignment(cost);
  for (std::size_t i = 0; i < z1.size(); ++i) {
    if (cost[i][static_cast<std::size_t>(match[i])] > tol) return false;
  }
  return true;
}

std::vector<cplx> canonical_zeros(const std::vector<cplx>& zeros) {
  std::vector<cplx> out;
  out.reserve(zeros.size());
  for (const cplx a : zeros) {
    double re = std::round(a.real() * 1e9) / 1e9;
    double im = std::round(a.imag() * 1e9) / 1e9;
    if (re == 0.0) re = 0.0;  // drop negative zero
    if (im == 0.0) im = 0.0;
    out.emplace_back(re, im);
  }
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

BlaschkeProduct random_blaschke(int degree, double max_modulus, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  auto uniform = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  std::vector<cplx> zeros;
  for (int k = 0; k < degree; ++k) {
    const double r = max_modulus * std::sqrt(uniform());
    const double t = 2.0 * std::numbers::pi * uniform();
    zeros.push_back(std::polar(r, t));
  }
  const double t = 2.0 * std::numbers::pi * uniform();
  return BlaschkeProduct(std::polar(1.0, t), std::move(zeros), std::max(max_modulus, default_zero_guard));
}

}  // namespace pjb
