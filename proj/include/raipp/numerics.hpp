#ifndef RAIPP_NUMERICS_HPP
#define RAIPP_NUMERICS_HPP

#include <functional>

#include "raipp/point.hpp"

namespace raipp {

// Symmetric eigendecomposition, eigenvalues sorted descending with
// orthonormal eigenvector columns.  Backed by a dense self-adjoint
// eigensolver behind this narrow interface.
struct EigenDecomposition {
  Vec eigenvalues;
  Mat eigenvectors;
};

EigenDecomposition sym_eig(const Mat& X);

// Euclidean projection onto the probability simplex {x >= 0, sum x = 1}
// via sort-and-threshold.  Throws std::invalid_argument on empty input.
Vec simplex_project(const Vec& v);

// Projection onto {X symmetric PSD, trace X = 1}: eigendecompose,
// simplex-project the spectrum, reassemble.
Mat spectraplex_project(const Mat& X);

// Operator norm of a linear map given with its adjoint, by power iteration
// on adj o fwd certified through the Rayleigh-quotient residual.  Throws
// std::runtime_error on non-convergence.
double operator_norm(const std::function<Vec(const Vec&)>& fwd,
                     const std::function<Vec(const Vec&)>& adj,
                     Eigen::Index dim_in, double tol = 1e-6,
                     long max_iters = 100000);

// Max relative error of <grad, d> against central differences of `value`
// along `ndirs` random unit directions (seeded).
double fd_gradient_check(const std::function<double(const Vec&)>& value,
                         const Vec& grad, const Vec& z, double h_step,
                         int ndirs = 20, std::uint64_t seed = 0);

}  // namespace raipp

#endif  // RAIPP_NUMERICS_HPP
