#include "adaptseg/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "adaptseg/error.hpp"

namespace adaptseg {

std::string to_string(KernelFamily family) {
  return family == KernelFamily::Gaussian ? "gaussian" : "imq";
}

KernelFamily parse_kernel_family(const std::string& name) {
  if (name == "imq" || name == "inverse-multiquadric" || name == "inverse_multiquadric") {
    return KernelFamily::InverseMultiquadric;
  }
  if (name == "gaussian" || name == "gauss") return KernelFamily::Gaussian;
  fail(ErrorKind::Config, "unknown kernel family '" + name + "' (expected imq or gaussian)");
}

Kernel::Kernel(KernelFamily family, double delta) : family_(family), delta_(delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) fail(ErrorKind::Config, "kernel shape parameter delta must be positive");
  inv_delta2_ = 1.0 / (delta * delta);
}

double Kernel::from_squared(double r2) const {
  if (family_ == KernelFamily::Gaussian) return std::exp(-r2 * inv_delta2_);
  return 1.0 / std::sqrt(1.0 + 2.0 * r2 * inv_delta2_);
}

double Kernel::value(double r) const {
  if (r < 0.0 || std::isnan(r)) fail(ErrorKind::InvalidArgument, "kernel radius must be nonnegative");
  return from_squared(r * r);
}

Eigen::MatrixXd gram_matrix(const Kernel& k, std::span<const Point> pts) {
  const auto n = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    a(j, j) = 1.0;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      a(i, j) = a(j, i) = k(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]);
    }
  }
  return a;
}

double Interpolant::residual_tolerance(std::span<const double> vals) {
  double m = 0.0;
  for (double v : vals) m = std::max(m, std::abs(v));
  return 1e-8 * (1.0 + m);
}

Interpolant Interpolant::fit(const Kernel& kernel, std::span<const Point> pts, std::span<const double> vals) {
  if (pts.empty()) fail(ErrorKind::InvalidArgument, "cannot fit an interpolant on zero points");
  if (pts.size() != vals.size()) fail(ErrorKind::InvalidArgument, "point and value counts differ");

  Interpolant s(kernel);
  s.centers_.assign(pts.begin(), pts.end());
  s.values_.assign(vals.begin(), vals.end());

  const std::size_t n = pts.size();
  const double tol = pivot_tolerance(n);

  // Column k of `basis` holds N_k at every center.
  Eigen::MatrixXd basis(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<double> power2(n, 1.0);
  std::vector<double> residual(s.values_);
  std::vector<bool> used(n, false);
  std::vector<double> coeffs;

  for (std::size_t step = 0; step < n; ++step) {
    std::size_t p = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!used[i] && (p == n || power2[i] > power2[p])) p = i;
    }
    if (power2[p] < tol) {
      if (step == 0) {
        fail(ErrorKind::Numeric, "Gram matrix rank-deficient: first pivot (center " + std::to_string(p + 1) +
                                     ") has diagonal " + std::to_string(power2[p]) + " below tolerance");
      }
      break;
    }
    const double pivot = std::sqrt(power2[p]);
    Eigen::VectorXd col(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) col(static_cast<Eigen::Index>(i)) = kernel(pts[i], pts[p]);
    if (step > 0) {
      const auto done = static_cast<Eigen::Index>(step);
      col.noalias() -= basis.leftCols(done) * basis.row(static_cast<Eigen::Index>(p)).head(done).transpose();
    }
    col /= pivot;
    // Exact zeros at already chosen centers.
    for (std::size_t q : s.pivots_) col(static_cast<Eigen::Index>(q)) = 0.0;
    col(static_cast<Eigen::Index>(p)) = pivot;

    basis.col(static_cast<Eigen::Index>(step)) = col;

    const double a = residual[p] / pivot;
    coeffs.push_back(a);
    for (std::size_t i = 0; i < n; ++i) {
      const double v = col(static_cast<Eigen::Index>(i));
      residual[i] -= a * v;
      power2[i] -= v * v;
    }
    residual[p] = 0.0;
    power2[p] = 0.0;
    used[p] = true;
    s.pivots_.push_back(p);
  }

  const auto r = static_cast<Eigen::Index>(s.pivots_.size());
  s.lower_.resize(r, r);
  for (Eigen::Index i = 0; i < r; ++i) s.lower_.row(i) = basis.row(static_cast<Eigen::Index>(s.pivots_[static_cast<std::size_t>(i)])).head(r);
  s.newton_ = Eigen::Map<const Eigen::VectorXd>(coeffs.data(), r);
  s.standard_ = s.lower_.triangularView<Eigen::Lower>().transpose().solve(s.newton_);
  for (double v : residual) s.max_residual_ = std::max(s.max_residual_, std::abs(v));
  return s;
}

Eigen::VectorXd Interpolant::newton_basis(Point p) const {
  const auto r = static_cast<Eigen::Index>(pivots_.size());
  Eigen::VectorXd k(r);
  for (Eigen::Index i = 0; i < r; ++i) k(i) = kernel_(p, centers_[pivots_[static_cast<std::size_t>(i)]]);
  lower_.triangularView<Eigen::Lower>().solveInPlace(k);
  return k;
}

double Interpolant::eval_newton(Point p) const { return newton_.dot(newton_basis(p)); }

double Interpolant::eval_standard(Point p) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < pivots_.size(); ++i) sum += standard_(static_cast<Eigen::Index>(i)) * kernel_(p, centers_[pivots_[i]]);
  return sum;
}

std::vector<double> Interpolant::eval_many(std::span<const Point> pts) const {
  std::vector<double> out(pts.size());
  constexpr std::size_t kBlock = 512;
  const auto r = static_cast<Eigen::Index>(pivots_.size());
  for (std::size_t begin = 0; begin < pts.size(); begin += kBlock) {
    const std::size_t end = std::min(pts.size(), begin + kBlock);
    Eigen::MatrixXd k(r, static_cast<Eigen::Index>(end - begin));
    for (std::size_t j = begin; j < end; ++j) {
      for (Eigen::Index i = 0; i < r; ++i) {
        k(i, static_cast<Eigen::Index>(j - begin)) = kernel_(pts[j], centers_[pivots_[static_cast<std::size_t>(i)]]);
      }
    }
    lower_.triangularView<Eigen::Lower>().solveInPlace(k);
    const Eigen::VectorXd vals = k.transpose() * newton_;
    for (std::size_t j = begin; j < end; ++j) out[j] = vals(static_cast<Eigen::Index>(j - begin));
  }
  return out;
}

}  // namespace adaptseg
