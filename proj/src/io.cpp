#include "adaptseg/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "adaptseg/error.hpp"

namespace adaptseg {

namespace {

using nlohmann::json;

json optional_real(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json optional_count(const std::optional<std::size_t>& v) { return v ? json(*v) : json(nullptr); }

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string sigma_csv(const PipelineResult& r) {
  const auto& sigma = r.locality.sigma;
  std::vector<PointId> order(sigma.size());
  std::iota(order.begin(), order.end(), PointId{0});
  std::stable_sort(order.begin(), order.end(), [&](PointId a, PointId b) { return sigma[a] < sigma[b]; });
  std::string out = "id,sigma,good\n";
  for (PointId i : order) {
    out += std::to_string(i + 1) + "," + format_real(sigma[i]) + "," + (r.locality.good[i] ? "1" : "0") + "\n";
  }
  return out;
}

std::string seeds_csv(const PipelineResult& r) {
  std::string out = "id,component\n";
  const auto& label = r.selection.labeling.label;
  for (PointId i = 0; i < label.size(); ++i) {
    if (label[i] > 0) out += std::to_string(i + 1) + "," + std::to_string(label[i]) + "\n";
  }
  return out;
}

std::string classes_csv(const PipelineResult& r, const Dataset& data) {
  std::string out = "id,x,y,class,provenance\n";
  for (PointId i = 0; i < r.partition.label.size(); ++i) {
    const Point p = data.sites[i];
    out += std::to_string(i + 1) + "," + format_real(p.x) + "," + format_real(p.y) + "," +
           std::to_string(r.partition.label[i]) + "," + to_string(r.partition.provenance[i]) + "\n";
  }
  return out;
}

std::string blowup_trace_jsonl(const PipelineResult& r) {
  std::string out;
  for (const BlowupTraceEntry& e : r.trace) {
    json q = json::array();
    for (const CandidateQuotient& c : e.quotients) {
      q.push_back({{"class", c.cls},
                   {"distance", c.distance},
                   {"anchor", c.anchor + 1},
                   {"sigma_seed", c.sigma_seed},
                   {"sigma_unsure", c.sigma_unsure},
                   {"quotient", finite_or_null(c.ratio)}});
    }
    json line = {{"sweep", e.sweep},
                 {"point", e.point + 1},
                 {"chosen_class", e.chosen > 0 ? json(e.chosen) : json(nullptr)},
                 {"quotients", std::move(q)}};
    out += line.dump() + "\n";
  }
  return out;
}

std::string grid_errors_csv(const PipelineResult& r) {
  if (!r.grid) return {};
  const GridData& g = *r.grid;
  std::string out = "x,y,class,u,f,abs_err,safe\n";
  for (std::size_t k = 0; k < g.grid.points.size(); ++k) {
    const Point p = g.grid.points[k];
    out += format_real(p.x) + "," + format_real(p.y) + "," + std::to_string(g.cls[k]) + "," +
           format_real(g.u_segmented[k]) + "," + format_real(g.f_true[k]) + "," +
           format_real(std::abs(g.u_segmented[k] - g.f_true[k])) + "," + (g.safe.mask[k] ? "1" : "0") + "\n";
  }
  return out;
}

std::string report_json(const PipelineResult& r, const Dataset& data) {
  json j;
  j["case"] = r.truth ? json(to_string(*r.truth)) : json(nullptr);
  j["n_sites"] = data.sites.size();
  j["separation_distance"] = r.q;
  j["config"] = json::parse(r.config.to_json());
  j["classes"] = r.class_count();

  std::vector<std::size_t> sizes;
  for (const auto& set : r.partition.final_sets) sizes.push_back(set.size());
  j["class_sizes"] = sizes;

  j["locality"] = {{"median", r.locality.median},
                   {"threshold", r.locality.threshold},
                   {"threshold_factor", r.threshold_factor_used},
                   {"n_neighbors", r.locality.n_neighbors},
                   {"good", r.locality.good_count()}};
  j["splitting"] = {{"components_found", r.components.count},
                    {"components_kept", r.selection.labeling.count},
                    {"component_sizes", r.selection.labeling.sizes},
                    {"demoted", r.selection.demoted.size()},
                    {"seeds", r.seeded.classified_count()}};
  j["blowup"] = {{"sweeps", r.blowup_sweeps},
                 {"classified", r.classified_after_blowup},
                 {"correct", optional_count(r.correct_after_blowup)},
                 {"unsure", r.after_blowup.unsure.size()}};
  j["assignment"] = {{"skipped", r.config.skip_phase3},
                     {"classified", r.classified_final},
                     {"misclassified", optional_count(r.misclassified)}};
  j["errors"] = {{"linf_safe_segmented", optional_real(r.errors.linf_safe_segmented)},
                 {"linf_segmented", optional_real(r.errors.linf_segmented)},
                 {"linf_safe_global", optional_real(r.errors.linf_safe_global)},
                 {"linf_global", optional_real(r.errors.linf_global)}};
  if (r.grid) {
    j["grid"] = {{"step", r.grid->grid.step},
                 {"nodes", r.grid->grid.points.size()},
                 {"safe_nodes", r.grid->safe.safe_node_count()}};
  } else {
    j["grid"] = nullptr;
  }
  j["global_rank"] = r.global_rank;
  j["diagnostics"] = r.diagnostics;
  return j.dump(2) + "\n";
}

std::string case_csv(const Dataset& data) {
  if (!data.truth) fail(ErrorKind::InvalidArgument, "case_csv needs a benchmark dataset");
  std::string out = "x,y,f,true_class\n";
  for (PointId i = 0; i < data.sites.size(); ++i) {
    const Point p = data.sites[i];
    out += format_real(p.x) + "," + format_real(p.y) + "," + format_real(data.values[i]) + "," +
           std::to_string(true_class(*data.truth, p)) + "\n";
  }
  return out;
}

}  // namespace adaptseg
