#pragma once
// Reference implementations used only by the tests. They share no code with
// the library and favour brute force over speed.

#include <cmath>
#include <complex>
#include <functional>

namespace oracle {

// Plain Gauss series in long double; runs until terms stop mattering.
inline long double hyp2f1_series(long double a, long double b, long double c,
                                 long double x) {
  long double sum = 1.0L, term = 1.0L;
  for (long n = 0; n < 2'000'000; ++n) {
    term *= (a + n) * (b + n) / ((c + n) * (n + 1.0L)) * x;
    sum += term;
    if (std::fabs(term) < 1e-22L * std::fabs(sum)) break;
  }
  return sum;
}

// Gamma(x)/Gamma(y) by shifting both arguments up by n through the
// recursion and finishing with Stirling's series for the ratio at large
// argument.
inline long double gamma_ratio(long double x, long double y, int n = 50) {
  long double r = 1.0L;
  for (int k = 0; k < n; ++k) r *= (y + k) / (x + k);
  const long double X = x + n, Y = y + n;
  auto lg = [](long double z) {
    // Stirling with four correction terms; error ~ z^-9.
    const long double z2 = z * z;
    return (z - 0.5L) * std::log(z) - z + 0.5L * std::log(2.0L * 3.14159265358979323846264338327950288L) +
           1.0L / (12.0L * z) - 1.0L / (360.0L * z * z2) + 1.0L / (1260.0L * z * z2 * z2) -
           1.0L / (1680.0L * z * z2 * z2 * z2);
  };
  return r * std::exp(lg(X) - lg(Y));
}

// Adaptive Simpson for complex-valued integrands along a real parameter.
inline std::complex<double> simpson(const std::function<std::complex<double>(double)>& f,
                                    double a, double b, double tol, int depth = 50) {
  using C = std::complex<double>;
  std::function<C(double, double, C, C, C, C, double, int)> rec =
      [&](double lo, double hi, C flo, C fmid, C fhi, C whole, double eps, int d) -> C {
    const double mid = 0.5 * (lo + hi);
    const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
    const C flm = f(lm), frm = f(rm);
    const C left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
    const C right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
    if (d <= 0 || std::abs(left + right - whole) <= 15.0 * eps)
      return left + right + (left + right - whole) / 15.0;
    return rec(lo, mid, flo, flm, fmid, left, eps / 2, d - 1) +
           rec(mid, hi, fmid, frm, fhi, right, eps / 2, d - 1);
  };
  const C fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const C whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return rec(a, b, fa, fm, fb, whole, tol, depth);
}

}  // namespace oracle
