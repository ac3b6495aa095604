#include "adaptseg/benchfuncs.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "adaptseg/error.hpp"

namespace adaptseg {

std::string to_string(BenchCase c) {
  switch (c) {
    case BenchCase::F1: return "f1";
    case BenchCase::F2: return "f2";
    case BenchCase::F3: return "f3";
    case BenchCase::F4: return "f4";
  }
  return "f?";
}

BenchCase parse_bench_case(const std::string& name) {
  if (name == "f1") return BenchCase::F1;
  if (name == "f2") return BenchCase::F2;
  if (name == "f3") return BenchCase::F3;
  if (name == "f4") return BenchCase::F4;
  fail(ErrorKind::Config, "unknown benchmark case '" + name + "' (expected f1, f2, f3 or f4)");
}

double sine_curve(double y) { return 0.2 * std::sin(2.0 * std::numbers::pi * y) + 0.5; }

namespace {

double f1(Point p) { return std::log(std::abs(p.x - sine_curve(p.y)) + 0.5); }

double f3(Point p) {
  return std::atan(1e3 * (std::hypot(p.x + 0.05, p.y + 0.05) - 0.7));
}

}  // namespace

double eval_case(BenchCase c, Point p) {
  switch (c) {
    case BenchCase::F1: return f1(p);
    case BenchCase::F2: return p.x > sine_curve(p.y) ? f1(p) + 0.01 : f1(p);
    case BenchCase::F3: return f3(p);
    case BenchCase::F4: {
      const double r2 = (p.x - 0.5) * (p.x - 0.5) + (p.y - 0.5) * (p.y - 0.5);
      return std::pow(r2, 0.35) + (p.x > 0.5 ? 0.05 : 0.0);
    }
  }
  return 0.0;
}

int true_class(BenchCase c, Point p) {
  switch (c) {
    case BenchCase::F1:
    case BenchCase::F2: return p.x > sine_curve(p.y) ? 2 : 1;
    case BenchCase::F3: return f3(p) < 0.0 ? 1 : 2;
    case BenchCase::F4: return p.x > 0.5 ? 2 : 1;
  }
  return 0;
}

PointSet synthesize_sites(const SiteOptions& opts) {
  const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(opts.n_sites))));
  if (opts.n_sites == 0 || side * side != opts.n_sites) {
    fail(ErrorKind::Config, "number of sites must be a positive perfect square, got " + std::to_string(opts.n_sites));
  }
  if (!(opts.target_q > 0.0)) fail(ErrorKind::Config, "target separation must be positive");
  if (!(opts.margin >= 0.0)) fail(ErrorKind::Config, "domain margin must be nonnegative");
  if (!(opts.jitter >= 0.0)) fail(ErrorKind::Config, "jitter fraction must be nonnegative");

  const double lo = -opts.margin;
  const double extent = 1.0 + 2.0 * opts.margin;
  if (side == 1) return PointSet({{0.5, 0.5}});

  const double spacing = extent / static_cast<double>(side - 1);
  const double floor_q = 0.8 * opts.target_q;
  if (spacing < floor_q) {
    fail(ErrorKind::Config, "separation target infeasible: grid spacing " + std::to_string(spacing) +
                                " is below 0.8*target_q; target_q must be at most " + std::to_string(spacing / 0.8));
  }

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double amp = opts.jitter * spacing;
  constexpr int kMaxDraws = 1000;
  // Rows further back than this cannot come within the floor.
  const auto rows_back = static_cast<std::size_t>(std::ceil((floor_q + 2.0 * amp) / spacing));

  std::vector<Point> pts;
  pts.reserve(opts.n_sites);
  for (std::size_t row = 0; row < side; ++row) {
    for (std::size_t col = 0; col < side; ++col) {
      const Point base{lo + static_cast<double>(col) * spacing, lo + static_cast<double>(row) * spacing};
      Point p = base;
      bool placed = false;
      for (int draw = 0; draw < kMaxDraws && !placed; ++draw) {
        p = {base.x + amp * unit(rng), base.y + amp * unit(rng)};
        placed = true;
        const std::size_t first = row >= rows_back ? (row - rows_back) * side : 0;
        for (std::size_t k = first; k < pts.size(); ++k) {
          if (distance(p, pts[k]) < floor_q) {
            placed = false;
            break;
          }
        }
      }
      if (!placed) fail(ErrorKind::Numeric, "could not place a jittered site above the separation floor");
      pts.push_back(p);
    }
  }
  return PointSet(std::move(pts));
}

}  // namespace adaptseg
