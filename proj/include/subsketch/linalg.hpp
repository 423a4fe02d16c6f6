#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <limits>
#include <stdexcept>

#include "subsketch/kernels.hpp"
#include "subsketch/query_matrix.hpp"

namespace subsketch {

inline Eigen::MatrixXd to_eigen(const QueryMatrix& a) {
  Eigen::MatrixXd m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a.entry(i, j);
  return m;
}

// Oracle loss evaluation for a dense real matrix: sum_i kernel((Ax)_i).
inline double phi_norm(const Eigen::MatrixXd& a, const std::vector<double>& x,
                       const KernelFunction& kernel) {
  if (static_cast<std::size_t>(a.cols()) != x.size())
    throw std::invalid_argument("phi_norm: dimension mismatch");
  Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
  Eigen::VectorXd ax = a * xv;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < ax.size(); ++i) sum += kernel.eval(ax(i));
  return sum;
}

// Ratio of extreme singular values; infinity when numerically rank deficient.
inline double condition_number(const QueryMatrix& a) {
  Eigen::MatrixXd m = to_eigen(a);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  double smax = sv(0);
  double smin = sv(sv.size() - 1);
  double tol = smax * std::max(a.rows(), a.cols()) *
               std::numeric_limits<double>::epsilon();
  if (a.rows() < a.cols() || smin <= tol)
    return std::numeric_limits<double>::infinity();
  return smax / smin;
}

}  // namespace subsketch
