#include "raipp/problems.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numeric>
#include <stdexcept>

#include "raipp/numerics.hpp"
#include "raipp/rng.hpp"

namespace raipp {

double CooSymMat::frob_dot(const Vec& zflat, Eigen::Index n) const {
  double acc = 0.0;
  for (const Entry& e : entries) acc += e.value * zflat[e.col * n + e.row];
  return acc;
}

void CooSymMat::add_scaled(Vec& out, double s, Eigen::Index n) const {
  for (const Entry& e : entries) out[e.col * n + e.row] += s * e.value;
}

double CooSymMat::frob_norm_sq() const {
  double acc = 0.0;
  for (const Entry& e : entries) acc += e.value * e.value;
  return acc;
}

Vec SymOpSet::apply(const Vec& zflat) const {
  Vec out(count());
  for (Eigen::Index i = 0; i < count(); ++i)
    out[i] = mats[static_cast<std::size_t>(i)].frob_dot(zflat, n);
  return out;
}

Vec SymOpSet::adjoint(const Vec& y) const {
  Vec out = Vec::Zero(n * n);
  for (Eigen::Index i = 0; i < count(); ++i)
    mats[static_cast<std::size_t>(i)].add_scaled(out, y[i], n);
  return out;
}

Mat SymOpSet::weighted_gram(const Vec& weights) const {
  Mat G = Mat::Zero(n * n, n * n);
  Vec dense(n * n);
  for (Eigen::Index i = 0; i < count(); ++i) {
    dense.setZero();
    mats[static_cast<std::size_t>(i)].add_scaled(dense, 1.0, n);
    G.noalias() += weights[i] * dense * dense.transpose();
  }
  return G;
}

namespace {

// Fixed-size variants of the two spectraplex kernels.  Both sit on the
// solvers' innermost loops for desk-scale instances, where the dynamic
// paths spend a noticeable share of their time on allocation and on the
// dynamic-size eigensolver dispatch.
template <int N>
double spectraplex_indicator_fixed(const Vec& zflat, double tol) {
  using MatN = Eigen::Matrix<double, N, N>;
  const Eigen::Map<const MatN> X(zflat.data());
  const MatN S = 0.5 * (X + X.transpose());
  if ((X - X.transpose()).cwiseAbs().maxCoeff() > tol) return kInf;
  if (std::abs(X.trace() - 1.0) > tol) return kInf;
  Eigen::LLT<MatN> llt(S + tol * MatN::Identity());
  if (llt.info() != Eigen::Success) return kInf;
  return 0.0;
}

template <int N>
Vec spectraplex_prox_fixed(const Vec& u) {
  using MatN = Eigen::Matrix<double, N, N>;
  const Eigen::Map<const MatN> X(u.data());
  const MatN S = 0.5 * (X + X.transpose());
  Eigen::SelfAdjointEigenSolver<MatN> es(S);
  // Eigen returns the eigenvalues ascending; the simplex threshold rule
  // walks them in descending order, same as simplex_project.
  const Eigen::Matrix<double, N, 1>& lam = es.eigenvalues();
  double cum = 0.0, theta = 0.0;
  for (int i = 0; i < N; ++i) {
    const double si = lam[N - 1 - i];
    cum += si;
    const double t = (cum - 1.0) / static_cast<double>(i + 1);
    if (si > t) theta = t;
  }
  const Eigen::Matrix<double, N, 1> w = (lam.array() - theta).max(0.0);
  Vec out(N * N);
  Eigen::Map<MatN>(out.data()) =
      es.eigenvectors() * w.asDiagonal() * es.eigenvectors().transpose();
  return out;
}

}  // namespace

double spectraplex_indicator(const Vec& zflat, Eigen::Index n, double tol) {
  if (zflat.size() != n * n) throw std::invalid_argument("dimension mismatch");
  if (n == 4) return spectraplex_indicator_fixed<4>(zflat, tol);
  if (n == 8) return spectraplex_indicator_fixed<8>(zflat, tol);
  const Mat X = Eigen::Map<const Mat>(zflat.data(), n, n);
  if ((X - X.transpose()).cwiseAbs().maxCoeff() > tol) return kInf;
  if (std::abs(X.trace() - 1.0) > tol) return kInf;
  // Positive semidefiniteness within tol via a shifted Cholesky; much
  // cheaper than an eigensolve and this runs on the solvers' hot path.
  Eigen::LLT<Mat> llt(0.5 * (X + X.transpose()) +
                      tol * Mat::Identity(n, n));
  if (llt.info() != Eigen::Success) return kInf;
  return 0.0;
}

Vec spectraplex_prox(const Vec& u, Eigen::Index n) {
  if (u.size() != n * n) throw std::invalid_argument("dimension mismatch");
  if (n == 4) return spectraplex_prox_fixed<4>(u);
  if (n == 8) return spectraplex_prox_fixed<8>(u);
  return sym_flatten(spectraplex_project(sym_unflatten(u, n)));
}

double stationarity_residual(const Vec& v, double grad_at_z0_norm) {
  return v.norm() / (grad_at_z0_norm + 1.0);
}

namespace {

// Samples one n x n operator with exactly round(density * n^2) nonzero
// entries (positions without replacement), then stores its symmetrization.
CooSymMat sample_operator(std::uint64_t seed, std::string_view stream_name,
                          std::uint64_t substream, Eigen::Index n,
                          double density) {
  rng::Stream stream(seed, stream_name, substream);
  const Eigen::Index total = n * n;
  const Eigen::Index nnz = std::min<Eigen::Index>(
      total, static_cast<Eigen::Index>(std::llround(density * static_cast<double>(total))));

  std::vector<Eigen::Index> chosen;
  if (nnz == total) {
    chosen.resize(static_cast<std::size_t>(total));
    std::iota(chosen.begin(), chosen.end(), Eigen::Index{0});
  } else {
    // partial Fisher-Yates driven by the stream
    std::vector<Eigen::Index> pool(static_cast<std::size_t>(total));
    std::iota(pool.begin(), pool.end(), Eigen::Index{0});
    for (Eigen::Index i = 0; i < nnz; ++i) {
      const auto r = static_cast<std::size_t>(
          i + static_cast<Eigen::Index>(stream.bits() %
                                        static_cast<std::uint64_t>(total - i)));
      std::swap(pool[static_cast<std::size_t>(i)], pool[r]);
    }
    chosen.assign(pool.begin(), pool.begin() + nnz);
    std::sort(chosen.begin(), chosen.end());
  }

  CooSymMat mat;
  mat.entries.reserve(chosen.size() * 2);
  for (Eigen::Index idx : chosen) {
    const auto r = static_cast<std::uint32_t>(idx % n);
    const auto c = static_cast<std::uint32_t>(idx / n);
    const double v = stream.uniform();
    if (r == c) {
      mat.entries.push_back({r, c, v});
    } else {
      mat.entries.push_back({r, c, 0.5 * v});
      mat.entries.push_back({c, r, 0.5 * v});
    }
  }
  return mat;
}

struct SampledOps {
  SymOpSet A, B;
  Vec D, b;
};

SampledOps sample_ops(Eigen::Index l, Eigen::Index n, double density,
                      std::uint64_t seed) {
  if (l < 1 || n < 1) throw std::invalid_argument("dimensions must be >= 1");
  if (!(density > 0.0 && density <= 1.0))
    throw std::invalid_argument("density must lie in (0,1]");
  SampledOps ops;
  ops.A.n = ops.B.n = n;
  // Zero sampled operators would make a curvature piece vanish; retry on
  // the next substream block.
  for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
    ops.A.mats.clear();
    ops.B.mats.clear();
    const std::uint64_t off_a = attempt * static_cast<std::uint64_t>(l);
    const std::uint64_t off_b = attempt * static_cast<std::uint64_t>(n);
    double norm_a = 0.0, norm_b = 0.0;
    for (Eigen::Index i = 0; i < l; ++i) {
      ops.A.mats.push_back(sample_operator(
          seed, "A", off_a + static_cast<std::uint64_t>(i), n, density));
      norm_a += ops.A.mats.back().frob_norm_sq();
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      ops.B.mats.push_back(sample_operator(
          seed, "B", off_b + static_cast<std::uint64_t>(j), n, density));
      norm_b += ops.B.mats.back().frob_norm_sq();
    }
    if (norm_a > 0.0 && norm_b > 0.0) break;
    if (attempt == 63)
      throw std::runtime_error("instance generation: degenerate operators");
  }
  rng::Stream ds(seed, "D");
  ops.D = Vec(n);
  for (Eigen::Index j = 0; j < n; ++j) ops.D[j] = ds.uniform(1.0, 1000.0);
  rng::Stream bs(seed, "b");
  ops.b = Vec(l);
  for (Eigen::Index i = 0; i < l; ++i) ops.b[i] = bs.uniform();
  return ops;
}

// lambda_max of the PSD map z -> sum_i <M_i,z> M_i, optionally weighted.
double gram_lambda_max(const SymOpSet& ops, const Vec* weights, double tol) {
  const auto fwd = [&](const Vec& z) -> Vec {
    Vec y = ops.apply(z);
    if (weights) y.array() *= weights->array().sqrt();
    return y;
  };
  const auto adj = [&](const Vec& y) -> Vec {
    Vec w = y;
    if (weights) w.array() *= weights->array().sqrt();
    return ops.adjoint(w);
  };
  const double s = operator_norm(fwd, adj, ops.n * ops.n, tol);
  return s * s;
}

struct ExtremeEigs {
  double max, min;
};

ExtremeEigs dense_extremes(const Mat& H) {
  Eigen::SelfAdjointEigenSolver<Mat> es(H, Eigen::EigenvaluesOnly);
  return {es.eigenvalues().maxCoeff(), es.eigenvalues().minCoeff()};
}

}  // namespace

Mat qp_dense_hessian(const QpInstance& inst) {
  const Vec ones = Vec::Ones(inst.l);
  const Vec d2 = inst.D.array().square();
  return inst.c_scalar * inst.A.weighted_gram(ones) -
         inst.gamma * inst.B.weighted_gram(d2);
}

QpInstance gen_qp_instance(Eigen::Index l, Eigen::Index n, double density,
                           double target_M, double target_m,
                           std::uint64_t seed, Calibration calibration) {
  if (!(target_M >= target_m && target_m > 0.0))
    throw std::invalid_argument("targets must satisfy M >= m > 0");
  QpInstance inst;
  inst.l = l;
  inst.n = n;
  inst.density = density;
  inst.seed = seed;
  inst.calibration = calibration;
  inst.target_M = target_M;
  inst.target_m = target_m;
  SampledOps ops = sample_ops(l, n, density, seed);
  inst.A = std::move(ops.A);
  inst.B = std::move(ops.B);
  inst.D = std::move(ops.D);
  inst.b = std::move(ops.b);

  const Vec d2 = inst.D.array().square();
  if (calibration == Calibration::Conservative) {
    // Match the extreme curvature of each quadratic piece separately; the
    // combined Hessian is then guaranteed to stay within [-m, M].
    const double tol = 1e-8;
    const double lp = gram_lambda_max(inst.A, nullptr, tol);
    const double lm = gram_lambda_max(inst.B, &d2, tol);
    inst.c_scalar = target_M / (lp * (1.0 + 2.0 * tol));
    inst.gamma = target_m / (lm * (1.0 + 2.0 * tol));
    return inst;
  }

  // Exact calibration: with H+ = A-part Hessian and H- = B-part magnitude,
  // the pencil K(t) = H+ - t H- has lambda_max / (-lambda_min) weakly
  // decreasing in t; bisect on t to match M/m, then scale to hit M.
  if (n * n > 4096)
    throw std::invalid_argument(
        "ExactHessian calibration assembles the dense Hessian; use "
        "Conservative for n > 64");
  const Vec ones = Vec::Ones(l);
  const Mat Hp = inst.A.weighted_gram(ones);
  const Mat Hm = inst.B.weighted_gram(d2);
  const double target_ratio = target_M / target_m;
  const auto ratio_at = [&](double t) {
    const ExtremeEigs e = dense_extremes(Hp - t * Hm);
    if (!(e.min < 0.0)) return kInf;
    if (!(e.max > 0.0)) return 0.0;
    return e.max / (-e.min);
  };
  double lo = 1.0, hi = 1.0;
  while (ratio_at(lo) <= target_ratio) {
    lo /= 8.0;
    if (lo < 1e-150) throw std::runtime_error("calibration bracket failed (lo)");
  }
  while (ratio_at(hi) >= target_ratio) {
    hi *= 8.0;
    if (hi > 1e150) throw std::runtime_error("calibration bracket failed (hi)");
  }
  for (int it = 0; it < 200 && hi / lo > 1.0 + 1e-14; ++it) {
    const double mid = std::sqrt(lo * hi);
    (ratio_at(mid) > target_ratio ? lo : hi) = mid;
  }
  const double t = std::sqrt(lo * hi);
  const ExtremeEigs e = dense_extremes(Hp - t * Hm);
  inst.c_scalar = target_M / e.max;
  inst.gamma = t * inst.c_scalar;
  return inst;
}

ProblemOracle qp_oracle(const QpInstance& inst) {
  auto shared = std::make_shared<QpInstance>(inst);
  ProblemOracle o;
  o.smooth_value = [shared](const Vec& z) {
    const Vec az = shared->A.apply(z) - shared->b;
    const Vec dbz = shared->D.cwiseProduct(shared->B.apply(z));
    return -0.5 * shared->gamma * dbz.squaredNorm() +
           0.5 * shared->c_scalar * az.squaredNorm();
  };
  o.smooth_grad = [shared](const Vec& z) -> Vec {
    const Vec az = shared->A.apply(z) - shared->b;
    const Vec d2bz =
        shared->D.array().square() * shared->B.apply(z).array();
    return -shared->gamma * shared->B.adjoint(d2bz) +
           shared->c_scalar * shared->A.adjoint(az);
  };
  const Eigen::Index n = inst.n;
  o.nonsmooth_value = [n](const Vec& z) {
    return spectraplex_indicator(z, n);
  };
  o.nonsmooth_prox = [n](const Vec& u, double) -> Vec {
    return spectraplex_prox(u, n);
  };
  o.m = inst.target_m;
  o.M = inst.target_M;
  return o;
}

LcInstance gen_lc_instance(Eigen::Index l, Eigen::Index n, double density,
                           double L_f, std::uint64_t seed) {
  if (!(L_f > 0.0)) throw std::invalid_argument("L_f must be positive");
  LcInstance inst;
  inst.l = l;
  inst.n = n;
  inst.density = density;
  inst.seed = seed;
  inst.L_f = L_f;
  SampledOps ops = sample_ops(l, n, density, seed);
  inst.A = std::move(ops.A);
  inst.B = std::move(ops.B);
  inst.D = std::move(ops.D);

  const Vec d2 = inst.D.array().square();
  inst.alpha = L_f / gram_lambda_max(inst.B, &d2, 1e-9);

  // b = A(I_n / n), so I_n/n is feasible by construction.
  inst.b = inst.A.apply(sym_flatten(Mat::Identity(n, n) / static_cast<double>(n)));

  // ||A||_2 from power iteration, inflated so the curvature stays an
  // upper bound downstream.
  {
    const auto fwd = [&](const Vec& z) { return inst.A.apply(z); };
    const auto adj = [&](const Vec& y) { return inst.A.adjoint(y); };
    inst.A_norm = 1.01 * operator_norm(fwd, adj, n * n, 1e-6);
  }

  // Rank-3 initial point: convex combination of sampled unit outer products.
  rng::Stream nu_stream(seed, "nu");
  rng::Stream d_stream(seed, "d");
  Mat Z0 = Mat::Zero(n, n);
  double dsum = 0.0;
  double dvals[3];
  for (double& dv : dvals) {
    dv = d_stream.uniform();
    dsum += dv;
  }
  for (int i = 0; i < 3; ++i) {
    Vec nu(n);
    for (Eigen::Index j = 0; j < n; ++j) nu[j] = nu_stream.uniform();
    nu.normalize();
    Z0 += (dvals[i] / dsum) * nu * nu.transpose();
  }
  inst.z0 = sym_flatten(Z0);
  return inst;
}

ProblemOracle lc_f_oracle(const LcInstance& inst) {
  auto shared = std::make_shared<LcInstance>(inst);
  ProblemOracle o;
  o.smooth_value = [shared](const Vec& z) {
    const Vec dbz = shared->D.cwiseProduct(shared->B.apply(z));
    return -0.5 * shared->alpha * dbz.squaredNorm();
  };
  o.smooth_grad = [shared](const Vec& z) -> Vec {
    const Vec d2bz = shared->D.array().square() * shared->B.apply(z).array();
    return -shared->alpha * shared->B.adjoint(d2bz);
  };
  const Eigen::Index n = inst.n;
  o.nonsmooth_value = [n](const Vec& z) {
    return spectraplex_indicator(z, n);
  };
  o.nonsmooth_prox = [n](const Vec& u, double) -> Vec {
    return spectraplex_prox(u, n);
  };
  o.m = inst.L_f;
  o.M = inst.L_f;
  return o;
}

}  // namespace raipp
