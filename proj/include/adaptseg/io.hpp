#pragma once

#include <string>

#include "adaptseg/pipeline.hpp"

namespace adaptseg {

/// Shortest round-trip decimal form of a double.
std::string format_real(double v);

/// `id,sigma,good`, ascending by sigma then id.
std::string sigma_csv(const PipelineResult& r);
/// `id,component` for the seed sites kept by the splitting phase.
std::string seeds_csv(const PipelineResult& r);
/// `id,x,y,class,provenance` for every site; class 0 means unlabeled.
std::string classes_csv(const PipelineResult& r, const Dataset& data);
/// One JSON object per examined unsure site and sweep.
std::string blowup_trace_jsonl(const PipelineResult& r);
/// `x,y,class,u,f,abs_err,safe` per grid node; empty without ground truth.
std::string grid_errors_csv(const PipelineResult& r);
std::string report_json(const PipelineResult& r, const Dataset& data);
/// `x,y,f,true_class` for a benchmark dataset.
std::string case_csv(const Dataset& data);

}  // namespace adaptseg
