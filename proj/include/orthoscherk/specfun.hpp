#pragma once

#include <complex>

namespace orthoscherk {

struct HypergeometricParams {
  double a = 0.0;
  double b = 0.0;
  double c = 1.0;  // c > 0
  double x = 0.0;  // 0 <= x < 1
};

// Gamma function for x > 0. Throws DomainError otherwise.
double gamma(double x);

// Gauss series 2F1(a,b;c;x) on [0,1). Throws DomainError for x outside
// [0,1) or c <= 0.
double hyp2f1(const HypergeometricParams& p);
double hyp2f1(double a, double b, double c, double x);

struct JacobiValues {
  std::complex<double> sn, cn, dn;
};

// Jacobi elliptic functions for 0 <= m < 1. Real arguments use the descending
// Landen (AGM) recursion; complex ones the imaginary-argument addition
// formulas. Near a pole the values overflow to infinity.
JacobiValues jacobi(std::complex<double> u, double m);

}  // namespace orthoscherk
