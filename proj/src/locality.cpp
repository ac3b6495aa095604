#include "adaptseg/locality.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "adaptseg/error.hpp"
#include "adaptseg/parallel.hpp"

namespace adaptseg {

std::vector<double> locality_indicator(const PointSet& ps, std::span<const double> f, const Kernel& kernel,
                                       const LocalityOptions& opts) {
  const std::size_t n = opts.n_neighbors;
  if (f.size() != ps.size()) fail(ErrorKind::InvalidArgument, "data values and sites differ in count");
  for (double v : f) {
    if (!std::isfinite(v)) fail(ErrorKind::InvalidArgument, "data values must be finite");
  }
  const bool leave_out = !opts.include_self || opts.indicator == IndicatorKind::PredictionError;
  const std::size_t query_k = leave_out ? n + 1 : n;
  if (n < 1 || query_k > ps.size()) {
    fail(ErrorKind::InvalidArgument, "locality neighborhood size n=" + std::to_string(n) +
                                         " does not fit a set of N=" + std::to_string(ps.size()) + " sites");
  }

  std::vector<double> sigma(ps.size());
  parallel_for(ps.size(), opts.workers, [&](std::size_t i) {
    std::vector<Point> local_pts;
    std::vector<double> local_vals;
    local_pts.reserve(query_k);
    local_vals.reserve(query_k);
    for (const Neighbor& nb : ps.k_nearest(ps[i], query_k)) {
      if (leave_out && nb.id == i) continue;
      local_pts.push_back(ps[nb.id]);
      local_vals.push_back(f[nb.id]);
    }
    try {
      const Interpolant s = Interpolant::fit(kernel, local_pts, local_vals);
      sigma[i] = opts.indicator == IndicatorKind::NativeNorm ? s.native_norm() : std::abs(f[i] - s(ps[i]));
    } catch (const Error& e) {
      throw Error(e.kind(), "locality fit around site " + std::to_string(i + 1) + ": " + e.what());
    }
  });
  return sigma;
}

std::size_t LocalityScores::good_count() const {
  return static_cast<std::size_t>(std::count(good.begin(), good.end(), true));
}

double lower_median(std::span<const double> values) {
  if (values.empty()) fail(ErrorKind::InvalidArgument, "median of an empty sample");
  std::vector<double> v(values.begin(), values.end());
  const std::size_t mid = (v.size() - 1) / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  return v[mid];
}

LocalityScores good_point_mask(std::span<const double> sigma, double factor) {
  if (sigma.empty()) fail(ErrorKind::InvalidArgument, "good_point_mask needs at least one indicator");
  if (!(factor > 0.0)) fail(ErrorKind::Config, "threshold factor must be positive");
  for (double s : sigma) {
    if (!(s >= 0.0)) fail(ErrorKind::InvalidArgument, "locality indicators must be nonnegative");
  }
  LocalityScores scores;
  scores.sigma.assign(sigma.begin(), sigma.end());
  scores.median = lower_median(sigma);
  scores.threshold = factor * scores.median;
  scores.good.resize(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    scores.good[i] = scores.median > 0.0 ? sigma[i] < scores.threshold : sigma[i] == 0.0;
  }
  return scores;
}

}  // namespace adaptseg
