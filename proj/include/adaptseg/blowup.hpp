#pragma once

#include <cstddef>
#include <span>
#include <unordered_map>
#include <vector>

#include "adaptseg/geometry.hpp"
#include "adaptseg/kernel.hpp"
#include "adaptseg/splitting.hpp"

namespace adaptseg {

enum class Provenance { Unassigned, Seed, Blowup, Final };

const char* to_string(Provenance p);

/// Evolving partition of the sites. Class j (1-based) owns grown[j - 1],
/// which always contains the frozen seeds[j - 1]; everything else sits in
/// `unsure`, ordered by ascending locality indicator (ties by id).
struct ClassState {
  std::vector<std::vector<PointId>> seeds;
  std::vector<std::vector<PointId>> grown;
  std::vector<PointId> unsure;
  std::vector<int> label;  // 0 while unsure
  std::vector<Provenance> provenance;

  static ClassState from_components(const ComponentLabeling& components, std::span<const double> sigma);

  std::size_t class_count() const { return grown.size(); }
  std::size_t size() const { return label.size(); }
  std::size_t classified_count() const { return size() - unsure.size(); }
};

/// Throws Internal unless seeds are frozen subsets of their grown sets, grown
/// sets are disjoint, and grown sets plus unsure cover every site once, with
/// labels consistent with membership.
void check_partition(const ClassState& state);

enum class BlowupMode { Fixpoint, SinglePass };

struct BlowupOptions {
  std::size_t n_neighbors = 12;
  std::size_t m_candidates = 2;
  BlowupMode mode = BlowupMode::Fixpoint;
};

struct CandidateQuotient {
  int cls = 0;
  double distance = 0.0;  // from the unsure site to the grown class
  PointId anchor = 0;     // nearest frozen seed site
  double sigma_seed = 0.0;
  double sigma_unsure = 0.0;
  double ratio = 0.0;  // +inf when only the seed norm vanishes
};

struct BlowupTraceEntry {
  std::size_t sweep = 0;
  PointId point = 0;
  int chosen = 0;  // 0 when the site stays unsure
  std::vector<CandidateQuotient> quotients;
};

/// Phase-2 growth of the classes. Holds references to the sites and data,
/// which must outlive it.
class Blowup {
 public:
  Blowup(const PointSet& ps, std::span<const double> f, const Kernel& kernel, const ClassState& state,
         BlowupOptions opts);

  /// Distance from site i to the grown set of class j.
  double distance_to_class(const ClassState& state, PointId i, int cls) const;

  /// Norm quotient sigma_u / sigma_g for moving unsure site i into class j.
  CandidateQuotient quotient(const ClassState& state, PointId i, int cls);

  /// Candidate classes for site i: the min(m, J) classes nearest to it,
  /// nearest first, ties by class id.
  std::vector<int> candidates(const ClassState& state, PointId i) const;

  /// Sweeps the unsure list in order until no site moves (or once in
  /// single-pass mode). Returns the number of sweeps run.
  std::size_t run(ClassState& state, std::vector<BlowupTraceEntry>* trace = nullptr);

 private:
  double seed_norm(int cls, PointId anchor);
  double fit_norm(std::span<const PointId> ids) const;

  const PointSet& ps_;
  std::span<const double> f_;
  Kernel kernel_;
  BlowupOptions opts_;
  std::vector<KdTree> seed_trees_;
  std::unordered_map<PointId, double> seed_norm_cache_;
};

/// Convenience wrapper around Blowup::run.
ClassState blow_up(const PointSet& ps, std::span<const double> f, const Kernel& kernel, ClassState state,
                   const BlowupOptions& opts, std::vector<BlowupTraceEntry>* trace = nullptr);

}  // namespace adaptseg
