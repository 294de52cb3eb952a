#include "orthoscherk/quadrature.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "orthoscherk/errors.hpp"

namespace orthoscherk {
namespace {

QuadratureRule golub_welsch(int n, double a, double b) {
  // Monic Jacobi recurrence; a is the exponent at +1, b at -1.
  Eigen::VectorXd diag(n), off(std::max(n - 1, 0));
  const double ab = a + b;
  for (int k = 0; k < n; ++k) {
    if (k == 0) {
      diag(k) = (b - a) / (ab + 2.0);
    } else {
      diag(k) = (b * b - a * a) / ((2.0 * k + ab) * (2.0 * k + ab + 2.0));
    }
  }
  for (int k = 1; k < n; ++k) {
    double bk;
    if (k == 1) {
      bk = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      const double s = 2.0 * k + ab;
      bk = 4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    off(k - 1) = std::sqrt(bk);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) +
                              std::lgamma(b + 1.0) - std::lgamma(ab + 2.0));
  QuadratureRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int k = 0; k < n; ++k) {
    r.x[k] = es.eigenvalues()(k);
    const double v = es.eigenvectors()(0, k);
    r.w[k] = mu0 * v * v;
  }
  // Polish nodes with Newton steps on the Jacobi polynomial, then recompute
  // weights from the derivative; this recovers full relative accuracy for
  // the small weights next to the endpoints.
  auto eval = [&](double x, double& p, double& dp) {
    // Three-term recurrence for P_n^{(a,b)} and its derivative.
    double p0 = 1.0;
    double p1 = 0.5 * (a - b + (ab + 2.0) * x);
    if (n == 0) { p = p0; dp = 0.0; return; }
    for (int k = 2; k <= n; ++k) {
      const double c = 2.0 * k + ab;
      const double a1 = 2.0 * k * (k + ab) * (c - 2.0);
      const double a2 = (c - 1.0) * (a * a - b * b);
      const double a3 = (c - 2.0) * (c - 1.0) * c;
      const double a4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * c;
      const double p2 = ((a2 + a3 * x) * p1 - a4 * p0) / a1;
      p0 = p1;
      p1 = p2;
    }
    p = p1;
    // (2n+ab)(1-x^2) P' = n[(a-b) - (2n+ab)x] P + 2(n+a)(n+b) P_{n-1}
    const double c = 2.0 * n + ab;
    dp = (n * ((a - b) - c * x) * p1 + 2.0 * (n + a) * (n + b) * p0) / (c * (1.0 - x * x));
  };
  const double lg_const = (ab + 1.0) * std::log(2.0) + std::lgamma(n + a + 1.0) +
                          std::lgamma(n + b + 1.0) - std::lgamma(n + ab + 1.0) -
                          std::lgamma(n + 1.0);
  for (int k = 0; k < n; ++k) {
    double x = r.x[k], p, dp;
    for (int it = 0; it < 3; ++it) {
      eval(x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    eval(x, p, dp);
    if (std::isfinite(x) && std::abs(x) < 1.0 && std::isfinite(dp) && dp != 0.0) {
      // w_k = 2^{a+b+1} G(n+a+1) G(n+b+1) / (G(n+a+b+1) n! (1-x^2) P'(x)^2)
      const double w = std::exp(lg_const) / ((1.0 - x * x) * dp * dp);
      r.x[k] = x;
      if (std::isfinite(w) && w > 0.0) r.w[k] = w;
    }
  }
  // The Gamma prefactor above is only good to a few ulps of its logarithm;
  // pin the zeroth moment exactly instead.
  double sum = 0.0;
  for (double w : r.w) sum += w;
  for (double& w : r.w) w *= mu0 / sum;
  return r;
}

}  // namespace

const QuadratureRule& gauss_jacobi(int n, double alpha, double beta) {
  if (n < 1 || !(alpha > -1.0) || !(beta > -1.0))
    throw DomainError("gauss_jacobi: need n >= 1 and exponents > -1");
  static std::mutex mu;
  static std::map<std::tuple<int, double, double>, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(n, alpha, beta);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, golub_welsch(n, alpha, beta)).first;
  return it->second;
}

double arg_uhp(cplx w) {
  const double im = w.imag() > 0.0 ? w.imag() : 0.0;
  return std::atan2(im, w.real());
}

cplx pow_uhp(cplx w, double alpha) {
  if (alpha == 0.0) return 1.0;
  const double m = std::abs(w);
  if (m == 0.0) return alpha > 0.0 ? cplx(0.0) : cplx(INFINITY);
  return std::polar(std::pow(m, alpha), alpha * arg_uhp(w));
}

SegmentResult integrate_segment(const std::function<cplx(cplx)>& h, cplx A, cplx B,
                                double alphaA, double alphaB,
                                std::span<const cplx> singular, int n, double tol) {
  const cplx L = B - A;
  const double len = std::abs(L);
  if (len == 0.0) return {0.0, 0.0, 0};
  if (!(alphaA > -1.0) || !(alphaB > -1.0))
    throw DivergenceError("integrate_segment: non-integrable endpoint singularity");

  // Breakpoints in the segment parameter s in [0,1].
  std::vector<double> br = {0.0, 1.0};
  for (const cplx& p : singular) {
    const double s_raw = std::real((p - A) / L);
    const double s = std::clamp(s_raw, 0.0, 1.0);
    const double d = std::abs(p - (A + s * L)) / len;
    if (d >= 0.5) continue;
    if (d < 1e-15) {
      if (s > 0.0 && s < 1.0) throw SingularPathError("integration path meets a singular point");
      continue;  // singular point at an endpoint: caller handles it by weight
    }
    br.push_back(s);
    for (double step = d; step < 1.0; step *= 2.0) {
      if (s - step > 0.0) br.push_back(s - step);
      if (s + step < 1.0) br.push_back(s + step);
    }
  }
  std::sort(br.begin(), br.end());
  std::vector<double> pts;
  for (double v : br)
    if (pts.empty() || v - pts.back() > 1e-15) pts.push_back(v);
  if (pts.back() < 1.0) pts.back() = 1.0;

  const cplx preA = alphaA != 0.0 ? pow_uhp(L, alphaA) : cplx(1.0);
  const cplx preB = alphaB != 0.0 ? pow_uhp(-L, alphaB) : cplx(1.0);

  auto pass = [&](int nn) {
    cplx total = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
      const double sa = pts[k], sb = pts[k + 1];
      const bool atA = (sa == 0.0 && alphaA != 0.0);
      const bool atB = (sb == 1.0 && alphaB != 0.0);
      const auto& rule = gauss_jacobi(nn, atB ? alphaB : 0.0, atA ? alphaA : 0.0);
      const double half = 0.5 * (sb - sa);
      cplx acc = 0.0;
      for (int q = 0; q < nn; ++q) {
        const double x = rule.x[q];
        const double s = sa + half * (1.0 + x);
        cplx v = h(A + s * L);
        if (alphaA != 0.0 && !atA) v *= std::pow(s, alphaA);
        if (alphaB != 0.0 && !atB) v *= std::pow(1.0 - s, alphaB);
        acc += rule.w[q] * v;
      }
      double scale = half;
      if (atA) scale *= std::pow(half, alphaA);
      if (atB) scale *= std::pow(half, alphaB);
      total += acc * scale;
    }
    return total * L * preA * preB;
  };

  cplx prev = pass(n);
  int nn = n;
  double err = INFINITY;
  while (nn < 768) {
    nn *= 2;
    const cplx cur = pass(nn);
    err = std::abs(cur - prev);
    prev = cur;
    if (err <= tol * std::max(std::abs(cur), 1e-300)) break;
  }
  return {prev, err, nn};
}

}  // namespace orthoscherk
