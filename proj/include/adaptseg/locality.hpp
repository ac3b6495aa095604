#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "adaptseg/geometry.hpp"
#include "adaptseg/kernel.hpp"

namespace adaptseg {

enum class IndicatorKind {
  NativeNorm,       // sigma_i = ||s_i||_K of the local interpolant
  PredictionError,  // |f_i - s_i(x_i)| with x_i left out of the local fit
};

struct LocalityOptions {
  std::size_t n_neighbors = 12;
  /// Whether the neighborhood N_i counts x_i itself among its n members.
  bool include_self = true;
  IndicatorKind indicator = IndicatorKind::NativeNorm;
  unsigned workers = 1;
};

/// Per-site locality indicator computed from the n-nearest-neighbor fit
/// around each site. Throws InvalidArgument if n is out of range and
/// rethrows fit failures tagged with the offending site.
std::vector<double> locality_indicator(const PointSet& ps, std::span<const double> f, const Kernel& kernel,
                                       const LocalityOptions& opts);

struct LocalityScores {
  std::vector<double> sigma;
  double median = 0.0;
  double threshold = 0.0;
  std::vector<bool> good;
  std::size_t n_neighbors = 0;

  std::size_t good_count() const;
};

/// Lower median of a nonempty sample.
double lower_median(std::span<const double> values);

/// Marks sites with sigma < factor * median as good. When the median is zero
/// the strict test would reject everything, so exactly the zero-sigma sites
/// are good instead.
LocalityScores good_point_mask(std::span<const double> sigma, double factor = 2.0);

}  // namespace adaptseg
