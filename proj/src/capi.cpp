#include "adaptseg/adaptseg.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "adaptseg/error.hpp"
#include "adaptseg/io.hpp"
#include "adaptseg/pipeline.hpp"

struct adaptseg_config {
  adaptseg::PipelineConfig config;
};

struct adaptseg_dataset {
  adaptseg::Dataset data;
};

struct adaptseg_result {
  adaptseg::Dataset data;
  adaptseg::PipelineResult result;
};

namespace {

thread_local std::string last_error;

adaptseg_status to_status(adaptseg::ErrorKind kind) {
  switch (kind) {
    case adaptseg::ErrorKind::InvalidArgument: return ADAPTSEG_ERR_INVALID_ARGUMENT;
    case adaptseg::ErrorKind::Config: return ADAPTSEG_ERR_CONFIG;
    case adaptseg::ErrorKind::Numeric: return ADAPTSEG_ERR_NUMERIC;
    case adaptseg::ErrorKind::Io: return ADAPTSEG_ERR_IO;
    case adaptseg::ErrorKind::Internal: return ADAPTSEG_ERR_INTERNAL;
  }
  return ADAPTSEG_ERR_INTERNAL;
}

template <class F>
adaptseg_status guarded(F&& body) {
  try {
    body();
    return ADAPTSEG_OK;
  } catch (const adaptseg::Error& e) {
    last_error = e.what();
    return to_status(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return ADAPTSEG_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return ADAPTSEG_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) adaptseg::fail(adaptseg::ErrorKind::InvalidArgument, std::string(what) + " must not be null");
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string artifact(const adaptseg_result& r, const std::string& name) {
  if (name == "report") return adaptseg::report_json(r.result, r.data);
  if (name == "classes") return adaptseg::classes_csv(r.result, r.data);
  if (name == "sigma") return adaptseg::sigma_csv(r.result);
  if (name == "seeds") return adaptseg::seeds_csv(r.result);
  if (name == "blowup-trace") return adaptseg::blowup_trace_jsonl(r.result);
  if (name == "grid-errors") {
    if (!r.result.grid) adaptseg::fail(adaptseg::ErrorKind::InvalidArgument, "grid errors need a dataset with ground truth");
    return adaptseg::grid_errors_csv(r.result);
  }
  adaptseg::fail(adaptseg::ErrorKind::InvalidArgument, "unknown artifact '" + name + "'");
}

}  // namespace

extern "C" {

const char* adaptseg_version(void) { return "0.1.0"; }

const char* adaptseg_last_error(void) { return last_error.c_str(); }

const char* adaptseg_status_name(adaptseg_status status) {
  switch (status) {
    case ADAPTSEG_OK: return "ok";
    case ADAPTSEG_ERR_INVALID_ARGUMENT: return "invalid argument";
    case ADAPTSEG_ERR_CONFIG: return "config error";
    case ADAPTSEG_ERR_NUMERIC: return "numeric failure";
    case ADAPTSEG_ERR_IO: return "i/o error";
    case ADAPTSEG_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void adaptseg_string_free(char* s) { std::free(s); }

adaptseg_status adaptseg_config_new(adaptseg_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new adaptseg_config{};
  });
}

void adaptseg_config_free(adaptseg_config* cfg) { delete cfg; }

adaptseg_status adaptseg_config_set(adaptseg_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    require(cfg, "config");
    require(key, "key");
    require(value, "value");
    adaptseg::PipelineConfig updated = cfg->config;
    updated.set(key, value);
    cfg->config = updated;
  });
}

adaptseg_status adaptseg_config_merge_json(adaptseg_config* cfg, const char* json_text) {
  return guarded([&] {
    require(cfg, "config");
    require(json_text, "json_text");
    adaptseg::PipelineConfig updated = cfg->config;
    updated.merge_json(json_text);
    cfg->config = updated;
  });
}

adaptseg_status adaptseg_config_load_file(adaptseg_config* cfg, const char* path) {
  return guarded([&] {
    require(cfg, "config");
    require(path, "path");
    std::ifstream in(path, std::ios::binary);
    if (!in) adaptseg::fail(adaptseg::ErrorKind::Io, std::string("cannot open config file ") + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    adaptseg::PipelineConfig updated = cfg->config;
    updated.merge_json(buf.str());
    cfg->config = updated;
  });
}

adaptseg_status adaptseg_config_to_json(const adaptseg_config* cfg, char** out) {
  return guarded([&] {
    require(cfg, "config");
    require(out, "out");
    *out = duplicate(cfg->config.to_json());
  });
}

adaptseg_status adaptseg_dataset_from_case(const char* case_name, const adaptseg_config* cfg, adaptseg_dataset** out) {
  return guarded([&] {
    require(case_name, "case_name");
    require(cfg, "config");
    require(out, "out");
    cfg->config.validate();
    auto data = adaptseg::make_case_dataset(adaptseg::parse_bench_case(case_name), cfg->config);
    *out = new adaptseg_dataset{std::move(data)};
  });
}

adaptseg_status adaptseg_dataset_from_csv(const char* path, adaptseg_dataset** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new adaptseg_dataset{adaptseg::load_csv_dataset(path)};
  });
}

adaptseg_status adaptseg_dataset_from_arrays(const double* x, const double* y, const double* f, size_t count,
                                             adaptseg_dataset** out) {
  return guarded([&] {
    require(x, "x");
    require(y, "y");
    require(f, "f");
    require(out, "out");
    std::vector<adaptseg::Point> pts(count);
    for (size_t i = 0; i < count; ++i) pts[i] = {x[i], y[i]};
    adaptseg::PointSet sites(std::move(pts));
    *out = new adaptseg_dataset{{std::move(sites), std::vector<double>(f, f + count), std::nullopt}};
  });
}

void adaptseg_dataset_free(adaptseg_dataset* data) { delete data; }

size_t adaptseg_dataset_size(const adaptseg_dataset* data) { return data == nullptr ? 0 : data->data.sites.size(); }

adaptseg_status adaptseg_dataset_case_csv(const adaptseg_dataset* data, char** out) {
  return guarded([&] {
    require(data, "dataset");
    require(out, "out");
    *out = duplicate(adaptseg::case_csv(data->data));
  });
}

adaptseg_status adaptseg_run(const adaptseg_config* cfg, const adaptseg_dataset* data, adaptseg_result** out) {
  return guarded([&] {
    require(cfg, "config");
    require(data, "dataset");
    require(out, "out");
    auto res = std::make_unique<adaptseg_result>(adaptseg_result{data->data, {}});
    res->result = adaptseg::run_pipeline(cfg->config, res->data);
    *out = res.release();
  });
}

void adaptseg_result_free(adaptseg_result* res) { delete res; }

int adaptseg_result_class_count(const adaptseg_result* res) { return res == nullptr ? 0 : res->result.class_count(); }

adaptseg_status adaptseg_result_labels(const adaptseg_result* res, int* labels, size_t count) {
  return guarded([&] {
    require(res, "result");
    require(labels, "labels");
    const auto& l = res->result.partition.label;
    if (count > l.size()) adaptseg::fail(adaptseg::ErrorKind::InvalidArgument, "label buffer longer than the dataset");
    for (size_t i = 0; i < count; ++i) labels[i] = l[i];
  });
}

adaptseg_status adaptseg_result_artifact(const adaptseg_result* res, const char* name, char** out) {
  return guarded([&] {
    require(res, "result");
    require(name, "name");
    require(out, "out");
    *out = duplicate(artifact(*res, name));
  });
}

adaptseg_status adaptseg_result_write(const adaptseg_result* res, const char* name, const char* path) {
  return guarded([&] {
    require(res, "result");
    require(name, "name");
    require(path, "path");
    const std::string text = artifact(*res, name);
    std::ofstream outf(path, std::ios::binary);
    if (!outf) adaptseg::fail(adaptseg::ErrorKind::Io, std::string("cannot write ") + path);
    outf << text;
    if (!outf) adaptseg::fail(adaptseg::ErrorKind::Io, std::string("write failed for ") + path);
  });
}

}  // extern "C"
