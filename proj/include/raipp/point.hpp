#ifndef RAIPP_POINT_HPP
#define RAIPP_POINT_HPP

#include <Eigen/Dense>

namespace raipp {

// Points live in R^d. Symmetric n x n matrix variables are stored as the
// full matrix flattened column-major (d = n^2), so the Frobenius inner
// product equals the vector dot product.
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Flattens a matrix after symmetrizing it as (X + X^T)/2.
inline Vec sym_flatten(const Mat& X) {
  Mat S = 0.5 * (X + X.transpose());
  return Eigen::Map<const Vec>(S.data(), S.size());
}

inline Mat sym_unflatten(const Vec& v, Eigen::Index n) {
  Mat X = Eigen::Map<const Mat>(v.data(), n, n);
  return 0.5 * (X + X.transpose());
}

// An affine function x -> offset + <grad, x>.
struct AffineFunction {
  Vec grad;
  double offset = 0.0;

  double operator()(const Vec& x) const { return offset + grad.dot(x); }
};

// Affine minorant l(x) = value + <grad, x - center> of a function whose
// value and gradient at `center` are given.
inline AffineFunction affine_minorant(double value, const Vec& grad,
                                      const Vec& center) {
  return AffineFunction{grad, value - grad.dot(center)};
}

}  // namespace raipp

#endif  // RAIPP_POINT_HPP
