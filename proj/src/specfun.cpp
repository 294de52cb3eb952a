#include "orthoscherk/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "orthoscherk/errors.hpp"

namespace orthoscherk {
namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

// Valid for x >= 0.5.
double lanczos(double x) {
  x -= 1.0;
  double acc = kLanczos[0];
  for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (x + i);
  const double t = x + kLanczosG + 0.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, x + 0.5) *
         std::exp(-t) * acc;
}

bool is_nonpositive_integer(double x) {
  return x <= 0.0 && std::nearbyint(x) == x;
}

// 1/Gamma on the whole real line; zero at the poles.
double rgamma(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  if (x >= 0.5) return 1.0 / lanczos(x);
  // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
  return std::sin(std::numbers::pi * x) * lanczos(1.0 - x) / std::numbers::pi;
}

double series(double a, double b, double c, double x, long max_terms) {
  double sum = 1.0;
  double term = 1.0;
  for (long n = 0; n < max_terms; ++n) {
    term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * x;
    sum += term;
    if (term == 0.0 || std::abs(term) < 1e-16 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

double gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw DomainError("gamma: argument must be positive and finite");
  if (x >= 0.5) return lanczos(x);
  return lanczos(x + 1.0) / x;
}

double hyp2f1(double a, double b, double c, double x) {
  if (!(x >= 0.0 && x < 1.0)) throw DomainError("hyp2f1: x must lie in [0,1)");
  if (!(c > 0.0)) throw DomainError("hyp2f1: parameter pole (c <= 0)");
  if (x == 0.0) return 1.0;
  const double s = c - a - b;
  const bool integer_s = std::abs(s - std::nearbyint(s)) < 1e-9;
  if (x <= 0.8 || integer_s) return series(a, b, c, x, 20'000'000);

  // Connection formula to argument 1-x; both Gamma ratios use 1/Gamma so
  // that terms with a pole in the denominator vanish.
  const double y = 1.0 - x;
  const double g_c = gamma(c);
  const double first = g_c / rgamma(s) * rgamma(c - a) * rgamma(c - b) *
                       series(a, b, 1.0 - s, y, 100'000);
  const double second = g_c / rgamma(-s) * rgamma(a) * rgamma(b) *
                        std::pow(y, s) * series(c - a, c - b, 1.0 + s, y, 100'000);
  return first + second;
}

double hyp2f1(const HypergeometricParams& p) { return hyp2f1(p.a, p.b, p.c, p.x); }

namespace {

struct RealJacobi {
  double sn, cn, dn;
};

RealJacobi jacobi_real(double u, double m) {
  if (m == 0.0) return {std::sin(u), std::cos(u), 1.0};
  std::array<double, 32> a{}, c{};
  a[0] = 1.0;
  c[0] = std::sqrt(m);
  double b = std::sqrt(1.0 - m);
  int n = 0;
  while (std::abs(c[n]) > 1e-16 && n + 1 < static_cast<int>(a.size())) {
    a[n + 1] = 0.5 * (a[n] + b);
    c[n + 1] = 0.5 * (a[n] - b);
    b = std::sqrt(a[n] * b);
    ++n;
  }
  double phi = std::ldexp(a[n] * u, n);
  for (int j = n; j > 0; --j) phi = 0.5 * (phi + std::asin(c[j] / a[j] * std::sin(phi)));
  const double s = std::sin(phi);
  // dn >= sqrt(1 - m) > 0 on the real axis.
  return {s, std::cos(phi), std::sqrt(1.0 - m * s * s)};
}

}  // namespace

JacobiValues jacobi(std::complex<double> u, double m) {
  if (!(m >= 0.0 && m < 1.0)) throw DomainError("jacobi: m must lie in [0, 1)");
  const RealJacobi x = jacobi_real(u.real(), m);
  if (u.imag() == 0.0) return {x.sn, x.cn, x.dn};
  const RealJacobi y = jacobi_real(u.imag(), 1.0 - m);
  const double den = y.cn * y.cn + m * x.sn * x.sn * y.sn * y.sn;
  using C = std::complex<double>;
  return {C(x.sn * y.dn, x.cn * x.dn * y.sn * y.cn) / den,
          C(x.cn * y.cn, -x.sn * x.dn * y.sn * y.dn) / den,
          C(x.dn * y.cn * y.dn, -m * x.sn * x.cn * y.sn) / den};
}

}  // namespace orthoscherk
