#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adaptseg/assignment.hpp"
#include "adaptseg/benchfuncs.hpp"
#include "adaptseg/blowup.hpp"
#include "adaptseg/evaluation.hpp"
#include "adaptseg/geometry.hpp"
#include "adaptseg/kernel.hpp"
#include "adaptseg/locality.hpp"
#include "adaptseg/splitting.hpp"

namespace adaptseg {

enum class SafeZoneSets { Final, Grown };

struct PipelineConfig {
  KernelFamily kernel = KernelFamily::InverseMultiquadric;
  double delta = 0.35;
  std::size_t n_neighbors = 12;
  std::size_t m_candidates = 2;
  double threshold_factor = 2.0;
  std::size_t min_component_size = 0;  // 0 selects max(5, n_neighbors)
  BlowupMode blowup_mode = BlowupMode::Fixpoint;
  bool skip_phase3 = false;
  double grid_step = 0.01;
  std::uint64_t seed = 1;
  std::size_t n_sites = 900;
  double margin = 0.05;
  double target_q = 0.04;
  double jitter = 0.3;
  bool include_self = true;
  IndicatorKind indicator = IndicatorKind::NativeNorm;
  bool retry_single_component = true;
  double retry_threshold_factor = 1.5;
  SafeZoneSets safe_zone_sets = SafeZoneSets::Final;
  unsigned workers = 0;  // 0 selects the machine parallelism

  /// Throws Config on any out-of-range field.
  void validate() const;
  std::size_t effective_min_component_size() const;
  unsigned effective_workers() const;
  Kernel make_kernel() const { return Kernel(kernel, delta); }
  SiteOptions site_options() const;

  /// Sets one field from its textual form, e.g. ("delta", "0.3"). Throws
  /// Config on unknown keys or unparsable values.
  void set(const std::string& key, const std::string& value);
  /// JSON object with one member per field; keys as accepted by set().
  std::string to_json() const;
  /// Applies every member of a JSON object; unknown keys are rejected.
  void merge_json(const std::string& text);
};

struct Dataset {
  PointSet sites;
  std::vector<double> values;
  std::optional<BenchCase> truth;
};

Dataset make_case_dataset(BenchCase c, const PipelineConfig& config);
/// Parses `x,y,f` rows after a header line. Throws Io on malformed input and
/// InvalidArgument on duplicate sites.
Dataset parse_csv_dataset(const std::string& text);
Dataset load_csv_dataset(const std::string& path);

struct GridData {
  EvalGrid grid;
  std::vector<int> cls;
  std::vector<double> u_segmented;
  std::vector<double> u_global;
  std::vector<double> f_true;
  SafeZone safe;
};

struct PipelineResult {
  PipelineConfig config;
  std::optional<BenchCase> truth;
  double q = 0.0;

  LocalityScores locality;
  double threshold_factor_used = 0.0;
  ComponentLabeling components;
  MajorSelection selection;
  ClassState seeded;
  ClassState after_blowup;
  std::size_t blowup_sweeps = 0;
  std::vector<BlowupTraceEntry> trace;
  FinalPartition partition;

  std::optional<GridData> grid;
  ErrorReport errors;
  std::size_t global_rank = 0;

  std::size_t classified_after_blowup = 0;
  std::optional<std::size_t> correct_after_blowup;
  std::size_t classified_final = 0;
  std::optional<std::size_t> misclassified;
  std::vector<std::string> diagnostics;

  int class_count() const { return static_cast<int>(partition.class_count()); }
};

/// Locality, splitting, blow-up, final assignment and evaluation. Partition
/// invariants are checked after every phase. Errors are rethrown with the
/// failing phase prefixed.
PipelineResult run_pipeline(const PipelineConfig& config, const Dataset& data);

/// Counts sites whose label disagrees with the true class after mapping each
/// found class to the true class most of its members carry. Unlabeled sites
/// count as wrong.
std::size_t count_misclassified(const PointSet& ps, std::span<const int> labels, BenchCase truth);

}  // namespace adaptseg
