#include "adaptseg/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "adaptseg/error.hpp"
#include "adaptseg/parallel.hpp"

namespace adaptseg {

namespace {

using nlohmann::json;

double parse_real(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) fail(ErrorKind::Config, "invalid number for " + key + ": '" + text + "'");
  return v;
}

std::uint64_t parse_count(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) fail(ErrorKind::Config, "invalid integer for " + key + ": '" + text + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  fail(ErrorKind::Config, "invalid boolean for " + key + ": '" + text + "'");
}

std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_float()) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v.get<double>());
    return std::string(buf, ptr);
  }
  fail(ErrorKind::Config, "config values must be scalars");
}

template <class F>
auto in_phase(const char* phase, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(phase) + ": " + e.what());
  }
}

}  // namespace

void PipelineConfig::validate() const {
  auto need = [](bool ok, const std::string& what) {
    if (!ok) fail(ErrorKind::Config, what);
  };
  need(delta > 0.0 && std::isfinite(delta), "delta must be positive");
  need(n_neighbors >= 2, "n_neighbors must be at least 2");
  need(m_candidates >= 1, "m_candidates must be at least 1");
  need(threshold_factor > 0.0, "threshold_factor must be positive");
  need(grid_step > 0.0 && grid_step <= 1.0, "grid_step must lie in (0, 1]");
  need(n_sites >= 1, "N must be positive");
  need(margin >= 0.0, "margin must be nonnegative");
  need(target_q > 0.0, "target_q must be positive");
  need(jitter >= 0.0, "jitter must be nonnegative");
  need(retry_threshold_factor > 0.0, "retry_threshold_factor must be positive");
}

std::size_t PipelineConfig::effective_min_component_size() const {
  return min_component_size > 0 ? min_component_size : std::max<std::size_t>(5, n_neighbors);
}

unsigned PipelineConfig::effective_workers() const { return workers > 0 ? workers : default_workers(); }

SiteOptions PipelineConfig::site_options() const { return {n_sites, margin, target_q, jitter, seed}; }

void PipelineConfig::set(const std::string& key, const std::string& value) {
  if (key == "kernel") {
    kernel = parse_kernel_family(value);
  } else if (key == "delta") {
    delta = parse_real(key, value);
  } else if (key == "n_neighbors" || key == "n") {
    n_neighbors = parse_count(key, value);
  } else if (key == "m_candidates" || key == "m") {
    m_candidates = parse_count(key, value);
  } else if (key == "threshold_factor") {
    threshold_factor = parse_real(key, value);
  } else if (key == "min_component_size") {
    min_component_size = parse_count(key, value);
  } else if (key == "blowup_mode") {
    if (value == "fixpoint") {
      blowup_mode = BlowupMode::Fixpoint;
    } else if (value == "single-pass" || value == "single_pass") {
      blowup_mode = BlowupMode::SinglePass;
    } else {
      fail(ErrorKind::Config, "blowup_mode must be fixpoint or single-pass");
    }
  } else if (key == "skip_phase3") {
    skip_phase3 = parse_bool(key, value);
  } else if (key == "grid_step") {
    grid_step = parse_real(key, value);
  } else if (key == "seed") {
    seed = parse_count(key, value);
  } else if (key == "N" || key == "n_sites") {
    n_sites = parse_count(key, value);
  } else if (key == "margin") {
    margin = parse_real(key, value);
  } else if (key == "target_q") {
    target_q = parse_real(key, value);
  } else if (key == "jitter") {
    jitter = parse_real(key, value);
  } else if (key == "include_self") {
    include_self = parse_bool(key, value);
  } else if (key == "indicator") {
    if (value == "norm") {
      indicator = IndicatorKind::NativeNorm;
    } else if (value == "prediction") {
      indicator = IndicatorKind::PredictionError;
    } else {
      fail(ErrorKind::Config, "indicator must be norm or prediction");
    }
  } else if (key == "retry_single_component") {
    retry_single_component = parse_bool(key, value);
  } else if (key == "retry_threshold_factor") {
    retry_threshold_factor = parse_real(key, value);
  } else if (key == "safe_zone_sets") {
    if (value == "final") {
      safe_zone_sets = SafeZoneSets::Final;
    } else if (value == "grown") {
      safe_zone_sets = SafeZoneSets::Grown;
    } else {
      fail(ErrorKind::Config, "safe_zone_sets must be final or grown");
    }
  } else if (key == "workers") {
    workers = static_cast<unsigned>(parse_count(key, value));
  } else {
    fail(ErrorKind::Config, "unknown config key '" + key + "'");
  }
}

std::string PipelineConfig::to_json() const {
  json j;
  j["kernel"] = to_string(kernel);
  j["delta"] = delta;
  j["n_neighbors"] = n_neighbors;
  j["m_candidates"] = m_candidates;
  j["threshold_factor"] = threshold_factor;
  j["min_component_size"] = min_component_size;
  j["blowup_mode"] = blowup_mode == BlowupMode::Fixpoint ? "fixpoint" : "single-pass";
  j["skip_phase3"] = skip_phase3;
  j["grid_step"] = grid_step;
  j["seed"] = seed;
  j["N"] = n_sites;
  j["margin"] = margin;
  j["target_q"] = target_q;
  j["jitter"] = jitter;
  j["include_self"] = include_self;
  j["indicator"] = indicator == IndicatorKind::NativeNorm ? "norm" : "prediction";
  j["retry_single_component"] = retry_single_component;
  j["retry_threshold_factor"] = retry_threshold_factor;
  j["safe_zone_sets"] = safe_zone_sets == SafeZoneSets::Final ? "final" : "grown";
  j["workers"] = workers;
  return j.dump(2);
}

void PipelineConfig::merge_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::Config, std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorKind::Config, "config must be a JSON object");
  for (const auto& [key, value] : j.items()) set(key, scalar_text(value));
}

Dataset make_case_dataset(BenchCase c, const PipelineConfig& config) {
  PointSet sites = synthesize_sites(config.site_options());
  std::vector<double> values;
  values.reserve(sites.size());
  for (const Point& p : sites.points()) values.push_back(eval_case(c, p));
  return {std::move(sites), std::move(values), c};
}

Dataset parse_csv_dataset(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<Point> pts;
  std::vector<double> vals;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<double> fields;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t");
      const auto e = cell.find_last_not_of(" \t");
      const std::string trimmed = b == std::string::npos ? "" : cell.substr(b, e - b + 1);
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(trimmed.data(), trimmed.data() + trimmed.size(), v);
      if (trimmed.empty() || ec != std::errc() || ptr != trimmed.data() + trimmed.size() || !std::isfinite(v)) {
        fail(ErrorKind::Io, "line " + std::to_string(line_no) + ": invalid number '" + trimmed + "'");
      }
      fields.push_back(v);
    }
    if (fields.size() != 3) fail(ErrorKind::Io, "line " + std::to_string(line_no) + ": expected 3 fields x,y,f");
    pts.push_back({fields[0], fields[1]});
    vals.push_back(fields[2]);
  }
  if (pts.empty()) fail(ErrorKind::Io, "data file has no rows");
  return {PointSet(std::move(pts)), std::move(vals), std::nullopt};
}

Dataset load_csv_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open data file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv_dataset(buf.str());
}

std::size_t count_misclassified(const PointSet& ps, std::span<const int> labels, BenchCase truth) {
  std::map<int, std::map<int, std::size_t>> votes;
  for (PointId i = 0; i < ps.size(); ++i) {
    if (labels[i] != 0) ++votes[labels[i]][true_class(truth, ps[i])];
  }
  std::map<int, int> mapped;
  for (const auto& [cls, tally] : votes) {
    mapped[cls] = std::max_element(tally.begin(), tally.end(), [](const auto& a, const auto& b) {
                    return a.second < b.second;
                  })->first;
  }
  std::size_t wrong = 0;
  for (PointId i = 0; i < ps.size(); ++i) {
    if (labels[i] == 0 || mapped[labels[i]] != true_class(truth, ps[i])) ++wrong;
  }
  return wrong;
}

PipelineResult run_pipeline(const PipelineConfig& config, const Dataset& data) {
  config.validate();
  const PointSet& ps = data.sites;
  const std::span<const double> f = data.values;
  if (f.size() != ps.size()) fail(ErrorKind::InvalidArgument, "data values and sites differ in count");
  const std::size_t n = std::min(config.n_neighbors, ps.size());
  if (ps.size() < 2) fail(ErrorKind::InvalidArgument, "the pipeline needs at least 2 sites");

  const Kernel kernel = config.make_kernel();
  const unsigned workers = config.effective_workers();
  PipelineResult res;
  res.config = config;
  res.truth = data.truth;
  res.q = separation_distance(ps);

  in_phase("locality", [&] {
    LocalityOptions lo;
    lo.include_self = config.include_self;
    lo.indicator = config.indicator;
    lo.workers = workers;
    const bool leave_out = !lo.include_self || lo.indicator == IndicatorKind::PredictionError;
    lo.n_neighbors = leave_out ? std::min(n, ps.size() - 1) : n;
    const std::vector<double> sigma = locality_indicator(ps, f, kernel, lo);
    res.locality = good_point_mask(sigma, config.threshold_factor);
    res.locality.n_neighbors = lo.n_neighbors;
    res.threshold_factor_used = config.threshold_factor;
  });

  in_phase("splitting", [&] {
    const std::vector<Edge> edges = neighbor_edge_list(ps, n);
    auto split = [&](const LocalityScores& scores) {
      std::vector<PointId> good_ids;
      for (PointId i = 0; i < ps.size(); ++i) {
        if (scores.good[i]) good_ids.push_back(i);
      }
      if (good_ids.empty()) fail(ErrorKind::Numeric, "no good sites; all indicators exceed the threshold");
      res.components = spanning_forest(filter_edges(edges, scores.good), good_ids, ps.size());
      res.selection = select_major_components(res.components, config.effective_min_component_size());
    };
    split(res.locality);
    if (res.selection.labeling.count == 1 && config.retry_single_component &&
        config.retry_threshold_factor != config.threshold_factor) {
      res.diagnostics.push_back("splitting produced a single component at threshold factor " +
                                std::to_string(config.threshold_factor) + "; retrying with " +
                                std::to_string(config.retry_threshold_factor));
      LocalityScores retry = good_point_mask(res.locality.sigma, config.retry_threshold_factor);
      retry.n_neighbors = res.locality.n_neighbors;
      const ComponentLabeling first_components = res.components;
      const MajorSelection first_selection = res.selection;
      try {
        split(retry);
      } catch (const Error&) {
        res.selection.labeling.count = 0;
      }
      if (res.selection.labeling.count >= 2) {
        res.locality = std::move(retry);
        res.threshold_factor_used = config.retry_threshold_factor;
      } else {
        res.components = first_components;
        res.selection = first_selection;
        res.diagnostics.push_back("retry did not split the data; continuing with a single class");
      }
    } else if (res.selection.labeling.count == 1) {
      res.diagnostics.push_back("splitting produced a single component; continuing with a single class");
    }
    res.seeded = ClassState::from_components(res.selection.labeling, res.locality.sigma);
    check_partition(res.seeded);
  });

  in_phase("blowup", [&] {
    BlowupOptions bo;
    bo.n_neighbors = n;
    bo.m_candidates = config.m_candidates;
    bo.mode = config.blowup_mode;
    res.after_blowup = res.seeded;
    Blowup engine(ps, f, kernel, res.after_blowup, bo);
    res.blowup_sweeps = engine.run(res.after_blowup, &res.trace);
    check_partition(res.after_blowup);
    res.classified_after_blowup = res.after_blowup.classified_count();
    if (data.truth) {
      res.correct_after_blowup = ps.size() - count_misclassified(ps, res.after_blowup.label, *data.truth);
    }
  });

  in_phase("assignment", [&] {
    res.partition = config.skip_phase3 ? partition_without_assignment(res.after_blowup)
                                       : final_assign(ps, f, kernel, res.after_blowup);
    check_final_partition(res.partition, res.after_blowup, !config.skip_phase3);
    res.classified_final = static_cast<std::size_t>(
        std::count_if(res.partition.label.begin(), res.partition.label.end(), [](int l) { return l != 0; }));
    if (data.truth) res.misclassified = count_misclassified(ps, res.partition.label, *data.truth);
  });

  in_phase("evaluation", [&] {
    const Interpolant global = global_interpolant(ps, f, kernel);
    res.global_rank = global.rank();
    if (!data.truth) return;
    GridData gd;
    gd.grid = EvalGrid::unit_square(config.grid_step);
    const PiecewiseApproximant u(ps, f, kernel, res.partition.label, res.class_count());
    auto seg = u.evaluate(gd.grid.points, workers);
    gd.cls = std::move(seg.cls);
    gd.u_segmented = std::move(seg.u);
    gd.u_global = evaluate_parallel(global, gd.grid.points, workers);
    gd.f_true.reserve(gd.grid.points.size());
    for (const Point& p : gd.grid.points) gd.f_true.push_back(eval_case(*data.truth, p));
    const std::vector<int>& zone_labels =
        config.safe_zone_sets == SafeZoneSets::Final ? res.partition.label : res.after_blowup.label;
    gd.safe = safe_zone(ps, zone_labels, gd.grid, res.q);
    res.errors = error_report(gd.u_segmented, gd.u_global, gd.f_true, gd.safe.mask);
    res.grid = std::move(gd);
  });
  return res;
}

}  // namespace adaptseg
