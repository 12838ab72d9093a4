#include "raipp/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "raipp/rng.hpp"

namespace raipp {

EigenDecomposition sym_eig(const Mat& X) {
  Eigen::SelfAdjointEigenSolver<Mat> es(X);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("symmetric eigensolver failed");
  // Eigen returns ascending order; flip to descending.
  const Eigen::Index n = X.rows();
  EigenDecomposition d;
  d.eigenvalues = es.eigenvalues().reverse();
  d.eigenvectors = Mat(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    d.eigenvectors.col(i) = es.eigenvectors().col(n - 1 - i);
  return d;
}

Vec simplex_project(const Vec& v) {
  const Eigen::Index n = v.size();
  if (n == 0) throw std::invalid_argument("empty vector");
  std::vector<double> s(v.data(), v.data() + n);
  std::sort(s.begin(), s.end(), std::greater<double>());
  // Largest k with s_k > (sum_{i<=k} s_i - 1)/k; cumulative-sum rule
  // resolves threshold ties deterministically.
  double cum = 0.0, theta = 0.0;
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    cum += s[static_cast<std::size_t>(i)];
    const double t = (cum - 1.0) / static_cast<double>(i + 1);
    if (s[static_cast<std::size_t>(i)] > t) {
      theta = t;
      k = i + 1;
    }
  }
  (void)k;
  return (v.array() - theta).max(0.0);
}

Mat spectraplex_project(const Mat& X) {
  const Mat S = 0.5 * (X + X.transpose());
  EigenDecomposition d = sym_eig(S);
  const Vec lam = simplex_project(d.eigenvalues);
  return d.eigenvectors * lam.asDiagonal() * d.eigenvectors.transpose();
}

double operator_norm(const std::function<Vec(const Vec&)>& fwd,
                     const std::function<Vec(const Vec&)>& adj,
                     Eigen::Index dim_in, double tol, long max_iters) {
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  rng::Stream stream(0x9d2c5680, "power_iteration");
  Vec q(dim_in);
  for (Eigen::Index i = 0; i < dim_in; ++i) q[i] = 1.0 + stream.uniform();
  q.normalize();
  double lam = 0.0;
  for (long it = 0; it < max_iters; ++it) {
    Vec s = adj(fwd(q));
    lam = q.dot(s);
    const double res = (s - lam * q).norm();
    if (res <= tol * std::max(lam, 1e-300)) return std::sqrt(std::max(lam, 0.0));
    const double sn = s.norm();
    if (sn == 0.0) return 0.0;  // q in the null space and nothing to climb
    q = s / sn;
  }
  throw std::runtime_error("operator_norm: power iteration did not converge; best estimate " +
                           std::to_string(std::sqrt(std::max(lam, 0.0))));
}

double fd_gradient_check(const std::function<double(const Vec&)>& value,
                         const Vec& grad, const Vec& z, double h_step,
                         int ndirs, std::uint64_t seed) {
  if (!(h_step > 0.0)) throw std::invalid_argument("h_step must be positive");
  rng::Stream stream(seed, "fd_check");
  double worst = 0.0;
  for (int t = 0; t < ndirs; ++t) {
    Vec d(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i)
      d[i] = stream.uniform(-1.0, 1.0);
    d.normalize();
    const double fd =
        (value(z + h_step * d) - value(z - h_step * d)) / (2.0 * h_step);
    const double an = grad.dot(d);
    const double err = std::abs(fd - an) / (1.0 + std::abs(an));
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace raipp
