#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "adaptseg/geometry.hpp"

namespace adaptseg {

enum class KernelFamily {
  InverseMultiquadric,  // (1 + 2 r^2 / delta^2)^(-1/2)
  Gaussian,             // exp(-r^2 / delta^2)
};

std::string to_string(KernelFamily family);
/// Accepts "imq", "inverse-multiquadric", "gaussian". Throws Config otherwise.
KernelFamily parse_kernel_family(const std::string& name);

/// Positive definite radial kernel with phi(0) = 1.
class Kernel {
 public:
  Kernel(KernelFamily family, double delta);

  KernelFamily family() const { return family_; }
  double delta() const { return delta_; }

  /// phi(r); throws InvalidArgument for negative r.
  double value(double r) const;
  double operator()(Point a, Point b) const { return from_squared(squared_distance(a, b)); }
  double from_squared(double r2) const;

 private:
  KernelFamily family_;
  double delta_;
  double inv_delta2_;
};

/// A_ij = K(x_i, x_j).
Eigen::MatrixXd gram_matrix(const Kernel& k, std::span<const Point> pts);

/// Kernel interpolant in Newton form.
///
/// The fit runs a diagonally pivoted Cholesky elimination of the Gram matrix.
/// After r steps the selected centers x_{p_1..p_r} span the Newton basis
/// N_1..N_r with N_k(x_{p_l}) = L_lk (L lower triangular) and
/// sum_k N_k(x)^2 <= K(x, x). Elimination stops once the largest remaining
/// diagonal (the squared power function) drops below the pivot tolerance; the
/// remaining centers are then only matched up to that power function.
///
/// The native norm is the Euclidean norm of the Newton coefficients, and the
/// standard coefficients c = L^{-T} a give s = sum_k c_k K(., x_{p_k}).
class Interpolant {
 public:
  /// Fits the data. Throws InvalidArgument on mismatched or empty input and
  /// Numeric when not even the first pivot clears the tolerance.
  static Interpolant fit(const Kernel& kernel, std::span<const Point> pts, std::span<const double> vals);

  static double residual_tolerance(std::span<const double> vals);
  static double pivot_tolerance(std::size_t n) { return 1e-12 * static_cast<double>(n); }

  const Kernel& kernel() const { return kernel_; }
  std::span<const Point> centers() const { return centers_; }
  std::span<const double> values() const { return values_; }
  /// Indices into centers() of the selected pivots, in elimination order.
  std::span<const std::size_t> pivot_order() const { return pivots_; }
  std::size_t rank() const { return pivots_.size(); }
  const Eigen::VectorXd& newton_coeffs() const { return newton_; }
  /// Coefficients aligned with pivot_order().
  const Eigen::VectorXd& standard_coeffs() const { return standard_; }
  /// Max |s(x_i) - f_i| over all centers, from the elimination residual.
  double max_residual() const { return max_residual_; }

  double operator()(Point p) const { return eval_newton(p); }
  double eval_newton(Point p) const;
  double eval_standard(Point p) const;
  /// Newton-form evaluation at many points with one blocked triangular solve.
  std::vector<double> eval_many(std::span<const Point> pts) const;

  /// Newton basis values N_1..N_r at p.
  Eigen::VectorXd newton_basis(Point p) const;

  double native_norm() const { return newton_.norm(); }

 private:
  Interpolant(Kernel kernel) : kernel_(kernel) {}

  Kernel kernel_;
  std::vector<Point> centers_;
  std::vector<double> values_;
  std::vector<std::size_t> pivots_;
  Eigen::MatrixXd lower_;  // r x r, rows/cols in pivot order
  Eigen::VectorXd newton_;
  Eigen::VectorXd standard_;
  double max_residual_ = 0.0;
};

}  // namespace adaptseg
