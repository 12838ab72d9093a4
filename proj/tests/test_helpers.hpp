#ifndef RAIPP_TEST_HELPERS_HPP
#define RAIPP_TEST_HELPERS_HPP

#include <memory>

#include "raipp/oracle.hpp"
#include "raipp/point.hpp"
#include "raipp/rng.hpp"

namespace raipp::test {

// g(z) = 0.5 z'Qz + q'z with h = 0.  Q must be symmetric; the caller
// supplies a curvature pair consistent with Q's spectrum.
inline ProblemOracle quadratic_oracle(const Mat& Q, const Vec& q, double m,
                                      double M) {
  auto Qp = std::make_shared<Mat>(Q);
  auto qp = std::make_shared<Vec>(q);
  ProblemOracle o;
  o.smooth_value = [Qp, qp](const Vec& z) {
    return 0.5 * z.dot(*Qp * z) + qp->dot(z);
  };
  o.smooth_grad = [Qp, qp](const Vec& z) -> Vec { return *Qp * z + *qp; };
  o.nonsmooth_value = [](const Vec&) { return 0.0; };
  o.nonsmooth_prox = [](const Vec& u, double) -> Vec { return u; };
  o.m = m;
  o.M = M;
  return o;
}

// Replaces h = 0 by the indicator of the box [lo, hi]^n (prox = clamp).
inline void add_box(ProblemOracle& o, double lo, double hi) {
  o.nonsmooth_value = [lo, hi](const Vec& z) {
    for (Eigen::Index i = 0; i < z.size(); ++i)
      if (z[i] < lo - 1e-12 || z[i] > hi + 1e-12) return kInf;
    return 0.0;
  };
  o.nonsmooth_prox = [lo, hi](const Vec& u, double) -> Vec {
    return u.array().max(lo).min(hi);
  };
}

inline Vec e1(Eigen::Index n) {
  Vec v = Vec::Zero(n);
  v[0] = 1.0;
  return v;
}

inline Vec scalar(double x) {
  Vec v(1);
  v[0] = x;
  return v;
}

// A random symmetric matrix with spectrum inside [lo, hi].
inline Mat random_spd_like(Eigen::Index n, double lo, double hi,
                           rng::Stream& stream) {
  Mat G(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) G(i, j) = stream.uniform(-1.0, 1.0);
  Eigen::HouseholderQR<Mat> qr(G);
  Mat Q = qr.householderQ();
  Vec d(n);
  for (Eigen::Index i = 0; i < n; ++i) d[i] = stream.uniform(lo, hi);
  return Q * d.asDiagonal() * Q.transpose();
}

}  // namespace raipp::test

#endif  // RAIPP_TEST_HELPERS_HPP
