#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "subsketch/coreset1d.hpp"

namespace subsketch {

// Sign-split sketch of an n x 2 matrix for (1 +/- eps) estimates of ||Ax||_1.
// Rows with A_{i,1} != 0 become weighted points -A_{i,2}/A_{i,1} with weight
// |A_{i,1}| (split by the sign of A_{i,1} into two coresets); rows with
// A_{i,1} = 0 only ever contribute |x_2| * sum |A_{i,2}|, stored as a scalar.
class L1Sketch2D {
 public:
  L1Sketch2D(Coreset1D plus, Coreset1D minus, double a0_sum,
             double col1_abs_sum, double epsilon)
      : plus_(std::move(plus)),
        minus_(std::move(minus)),
        a0_sum_(a0_sum),
        col1_abs_sum_(col1_abs_sum),
        epsilon_(epsilon) {}

  double query(double x1, double x2) const {
    if (x2 == 0.0) return std::abs(x1) * col1_abs_sum_;
    double c = x1 / x2;
    return std::abs(x2) * (plus_.cost(c) + minus_.cost(c) + a0_sum_);
  }

  double query(const std::array<double, 2>& x) const { return query(x[0], x[1]); }

  const Coreset1D& coreset_plus() const { return plus_; }
  const Coreset1D& coreset_minus() const { return minus_; }
  double a0_sum() const { return a0_sum_; }
  double col1_abs_sum() const { return col1_abs_sum_; }
  double epsilon() const { return epsilon_; }

 private:
  Coreset1D plus_;
  Coreset1D minus_;
  double a0_sum_;
  double col1_abs_sum_;
  double epsilon_;
};

inline L1Sketch2D build_l1_2d_sketch(const Eigen::MatrixXd& a, double eps) {
  if (a.cols() != 2)
    throw std::invalid_argument("build_l1_2d_sketch: A must have exactly 2 columns");
  std::vector<double> pos_plus, w_plus, pos_minus, w_minus;
  double a0_sum = 0.0, col1_abs_sum = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    double a1 = a(i, 0), a2 = a(i, 1);
    if (a1 > 0.0) {
      pos_plus.push_back(-a2 / a1);
      w_plus.push_back(a1);
      col1_abs_sum += a1;
    } else if (a1 < 0.0) {
      pos_minus.push_back(-a2 / a1);
      w_minus.push_back(-a1);
      col1_abs_sum += -a1;
    } else {
      a0_sum += std::abs(a2);  // rows with both entries zero contribute 0
    }
  }
  return L1Sketch2D(build_coreset_1d(pos_plus, w_plus, eps),
                    build_coreset_1d(pos_minus, w_minus, eps), a0_sum,
                    col1_abs_sum, eps);
}

inline double query_l1_2d(const L1Sketch2D& sketch, const std::array<double, 2>& x) {
  return sketch.query(x);
}

}  // namespace subsketch
