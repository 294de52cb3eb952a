#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace orthoscherk {

struct QuadratureRule {
  std::vector<double> x;
  std::vector<double> w;
};

// Gauss rule on [-1,1] for the weight (1-x)^alpha (1+x)^beta, alpha, beta > -1.
// Rules are computed once per (n, alpha, beta) and cached; the cache is
// guarded, so concurrent callers are fine.
const QuadratureRule& gauss_jacobi(int n, double alpha, double beta);
inline const QuadratureRule& gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

using cplx = std::complex<double>;

// Integral over the straight segment A->B of
//   (t-A)^alphaA (t-B)^alphaB h(t) dt
// where the endpoint powers use the closed-upper-half-plane branch and h is
// smooth on the segment apart from the listed nearby singular points. The
// segment is graded geometrically toward each singular point so that every
// piece is no longer than twice its distance to the nearest one. Node counts
// start at n and double until two passes agree to tol (relative).
struct SegmentResult {
  cplx value;
  double error_estimate;
  int nodes;
};
SegmentResult integrate_segment(const std::function<cplx(cplx)>& h, cplx A, cplx B,
                                double alphaA, double alphaB,
                                std::span<const cplx> singular, int n = 48,
                                double tol = 1e-11);

// Principal power with argument taken in [0, pi] for points of the closed
// upper half-plane (a signed zero imaginary part is read as +0).
double arg_uhp(cplx w);
cplx pow_uhp(cplx w, double alpha);

}  // namespace orthoscherk
