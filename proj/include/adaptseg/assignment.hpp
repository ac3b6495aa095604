#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "adaptseg/blowup.hpp"
#include "adaptseg/geometry.hpp"
#include "adaptseg/kernel.hpp"

namespace adaptseg {

/// Prediction errors of the per-class interpolants at the unsure sites.
/// Rows follow `points`, columns follow classes 1..J.
struct NormalizedErrors {
  std::vector<PointId> points;
  std::vector<std::vector<double>> d;   // |f(x_i) - u_j(x_i)|
  std::vector<double> mu;               // column minima
  std::vector<double> max;              // column maxima
  std::vector<bool> degenerate;         // max == mu; that column of D is zero
  std::vector<std::vector<double>> D;   // (d - mu) / (max - mu)
};

/// Min-max normalization of a raw error matrix. A class whose fit failed is
/// marked by +inf errors and gets D = +inf throughout.
NormalizedErrors normalize_errors(std::vector<PointId> points, std::vector<std::vector<double>> d);

/// Fits u_j on each grown set and normalizes its errors over the unsure sites.
NormalizedErrors normalized_errors(const PointSet& ps, std::span<const double> f, const Kernel& kernel,
                                   const ClassState& state);

struct FinalPartition {
  std::vector<std::vector<PointId>> final_sets;
  std::vector<int> label;  // 0 only if phase 3 was skipped
  std::vector<Provenance> provenance;

  std::size_t class_count() const { return final_sets.size(); }
};

/// Assigns every unsure site to whichever of its two nearest grown classes
/// predicts it better in normalized error, ties to the nearer class.
FinalPartition final_assign(const PointSet& ps, std::span<const double> f, const Kernel& kernel,
                            const ClassState& state);

/// Copies the phase-2 state without touching the unsure sites.
FinalPartition partition_without_assignment(const ClassState& state);

/// Throws Internal unless final sets are disjoint, cover every labeled site,
/// and contain the grown sets of `state`.
void check_final_partition(const FinalPartition& fp, const ClassState& state, bool require_cover);

}  // namespace adaptseg
