#pragma once

#include <cstdint>
#include <string>

#include "adaptseg/geometry.hpp"

namespace adaptseg {

/// The four piecewise-smooth test functions.
///   f1: kink across x = 0.2 sin(2 pi y) + 0.5
///   f2: f1 plus a jump of 0.01 on the right of the same curve
///   f3: steep arctan ridge along the circle of radius 0.7 about (-0.05, -0.05)
///   f4: cone-like singularity at (0.5, 0.5) plus a jump of 0.05 for x > 0.5
enum class BenchCase { F1, F2, F3, F4 };

std::string to_string(BenchCase c);
/// Accepts "f1".."f4". Throws Config otherwise.
BenchCase parse_bench_case(const std::string& name);

double sine_curve(double y);
double eval_case(BenchCase c, Point p);
/// Ground-truth class in {1, 2}; class 1 is the left (f1, f2, f4) or the
/// negative (f3) side.
int true_class(BenchCase c, Point p);

struct SiteOptions {
  std::size_t n_sites = 900;
  double margin = 0.05;
  double target_q = 0.04;
  double jitter = 0.3;  // fraction of the grid spacing
  std::uint64_t seed = 1;
};

/// Jittered sqrt(N) x sqrt(N) grid on [-margin, 1 + margin]^2. Each site is
/// redrawn until it keeps at least 0.8 * target_q from every earlier site.
/// Throws Config if N is not a perfect square or the grid spacing is below
/// the separation floor.
PointSet synthesize_sites(const SiteOptions& opts);

}  // namespace adaptseg
