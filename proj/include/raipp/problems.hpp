#ifndef RAIPP_PROBLEMS_HPP
#define RAIPP_PROBLEMS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "raipp/oracle.hpp"
#include "raipp/point.hpp"

namespace raipp {

// Sparse symmetric matrix in coordinate form, acting on flattened
// symmetric variables by the Frobenius inner product.
struct CooSymMat {
  struct Entry {
    std::uint32_t row = 0;
    std::uint32_t col = 0;
    double value = 0.0;
  };
  std::vector<Entry> entries;

  double frob_dot(const Vec& zflat, Eigen::Index n) const;
  void add_scaled(Vec& out, double s, Eigen::Index n) const;
  double frob_norm_sq() const;
};

// A family of such matrices defining a linear map z -> (<M_i, z>_F)_i.
struct SymOpSet {
  Eigen::Index n = 0;  // matrix side; z lives in R^{n*n}
  std::vector<CooSymMat> mats;

  Eigen::Index count() const { return static_cast<Eigen::Index>(mats.size()); }
  Vec apply(const Vec& zflat) const;
  // adjoint(y) = flatten( sum_i y_i M_i )
  Vec adjoint(const Vec& y) const;
  // sum_i w_i vec(M_i) vec(M_i)^T as a dense n^2 x n^2 matrix.
  Mat weighted_gram(const Vec& weights) const;
};

enum class Calibration { ExactHessian, Conservative };

// Instance of the spectraplex QP
//   min { -(gamma/2)||D B(z)||^2 + (c/2)||A(z) - b||^2 : z in P_n }.
struct QpInstance {
  Eigen::Index l = 0, n = 0;
  double density = 1.0;
  std::uint64_t seed = 0;
  Calibration calibration = Calibration::ExactHessian;
  double target_M = 0.0, target_m = 0.0;
  double gamma = 0.0, c_scalar = 0.0;
  SymOpSet A;  // l matrices
  SymOpSet B;  // n matrices
  Vec D;       // positive diagonal, length n
  Vec b;       // length l
};

// Linearly constrained instance
//   min { -(alpha/2)||D B(z)||^2 : A(z) = b, z in P_n }
// with b = A(I_n / n), so I_n/n is feasible, and a sampled rank-3 initial
// point z0 in P_n.
struct LcInstance {
  Eigen::Index l = 0, n = 0;
  double density = 1.0;
  std::uint64_t seed = 0;
  double L_f = 0.0, alpha = 0.0;
  SymOpSet A;
  SymOpSet B;
  Vec D;
  Vec b;
  Vec z0;
  double A_norm = 0.0;  // certified upper estimate of ||A||_2
};

// Samples operator entries from U[0,1] (D from U[1,1000]) on dedicated
// seed streams and scales (gamma, c) to hit the curvature targets:
// ExactHessian matches the extreme eigenvalues of the full Hessian
// (dense eigensolve, requires n^2 <= 4096); Conservative matches the
// extreme eigenvalues of the two quadratic pieces separately, which upper
// bounds the true curvature.  Degenerate zero operators are resampled on
// the next substream.
QpInstance gen_qp_instance(Eigen::Index l, Eigen::Index n, double density,
                           double target_M, double target_m,
                           std::uint64_t seed,
                           Calibration calibration = Calibration::ExactHessian);

LcInstance gen_lc_instance(Eigen::Index l, Eigen::Index n, double density,
                           double L_f, std::uint64_t seed);

// Composite oracle of a QP instance: smooth part as above, nonsmooth part
// the indicator of P_n with prox = spectraplex projection.
ProblemOracle qp_oracle(const QpInstance& inst);

// Oracle of the unpenalized objective f of an LC instance, with
// (m, M) = (L_f, L_f); same spectraplex nonsmooth part.
ProblemOracle lc_f_oracle(const LcInstance& inst);

// Dense Hessian of the QP smooth part, for small-n verification.
Mat qp_dense_hessian(const QpInstance& inst);

// The shared relative termination measure ||v|| / (||grad g(z0)|| + 1).
double stationarity_residual(const Vec& v, double grad_at_z0_norm);

// Spectraplex membership indicator (0 / +inf within tolerance) and its
// prox, shared by both families.
double spectraplex_indicator(const Vec& zflat, Eigen::Index n,
                             double tol = 1e-7);
Vec spectraplex_prox(const Vec& u, Eigen::Index n);

// --- instance archives -------------------------------------------------
// Little-endian binary archive (see README for the exact layout) plus a
// JSON metadata sidecar written next to it as <path>.json.
void save_instance(const QpInstance& inst, const std::string& path);
void save_instance(const LcInstance& inst, const std::string& path);
QpInstance load_qp_instance(const std::string& path);
LcInstance load_lc_instance(const std::string& path);
// Peeks at the archive kind: "qp" or "lc".
std::string instance_kind(const std::string& path);

}  // namespace raipp

#endif  // RAIPP_PROBLEMS_HPP
