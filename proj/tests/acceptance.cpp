// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Benchmarks use N=900, IMQ delta=0.35, grid step 0.01, seed 1.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include "adaptseg/error.hpp"
#include "adaptseg/io.hpp"
#include "adaptseg/pipeline.hpp"

using namespace adaptseg;

namespace {

int failures = 0;

void report(const char* id, bool ok, const std::string& detail) {
  std::printf("%s  %-3s %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string pct(std::size_t num, std::size_t den) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%zu/%zu (%.2f%%)", num, den, 100.0 * double(num) / double(den));
  return buf;
}

struct Run {
  Dataset data;
  PipelineResult result;
  double seconds = 0.0;
};

Run run_case(BenchCase c, PipelineConfig cfg = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  Dataset data = make_case_dataset(c, cfg);
  PipelineResult result = run_pipeline(cfg, data);
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(data), std::move(result), s};
}

// Sites whose final class disagrees with the true side under the majority
// mapping of classes to sides; unlabeled sites count as wrong.
std::vector<PointId> wrong_sites(const Run& r, std::span<const int> labels) {
  const BenchCase c = *r.data.truth;
  std::vector<std::array<std::size_t, 3>> votes(static_cast<std::size_t>(r.result.class_count()) + 1, {0, 0, 0});
  for (PointId i = 0; i < labels.size(); ++i) {
    if (labels[i] > 0) ++votes[static_cast<std::size_t>(labels[i])][static_cast<std::size_t>(true_class(c, r.data.sites[i]))];
  }
  std::vector<PointId> wrong;
  for (PointId i = 0; i < labels.size(); ++i) {
    const auto& v = votes[static_cast<std::size_t>(labels[i])];
    const int mapped = v[2] > v[1] ? 2 : 1;
    if (labels[i] == 0 || mapped != true_class(c, r.data.sites[i])) wrong.push_back(i);
  }
  return wrong;
}

double smooth(Point p) { return std::sin(3 * p.x) + p.y * p.y - 0.5 * p.x * p.y; }

std::vector<Point> random_points(std::size_t n, std::mt19937_64& rng, double min_gap) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> pts;
  while (pts.size() < n) {
    const Point p{u(rng), u(rng)};
    if (std::all_of(pts.begin(), pts.end(), [&](const Point& q) { return distance(p, q) > min_gap; })) pts.push_back(p);
  }
  return pts;
}

std::vector<double> sample(std::span<const Point> pts) {
  std::vector<double> v;
  for (const Point& p : pts) v.push_back(smooth(p));
  return v;
}

void criterion_1(const Run& f1) {
  const auto& e = f1.result.errors;
  const double seg = *e.linf_safe_segmented, glob = *e.linf_safe_global;
  report("1", seg <= 1e-3 && glob >= 1e-2 && seg / glob <= 0.1 && f1.seconds <= 60.0,
         "f1 safe-zone Linf: segmented " + sci(seg) + " (<= 1e-3), global " + sci(glob) + " (>= 1e-2), ratio " +
             sci(seg / glob) + " (<= 0.1), runtime " + sci(f1.seconds) + " s (<= 60)");
}

void criterion_5(const Run& f1) {
  const auto& e = f1.result.errors;
  PipelineConfig skip;
  skip.skip_phase3 = true;
  const Run no3 = run_case(BenchCase::F1, skip);
  const double with = *e.linf_segmented, without = *no3.result.errors.linf_segmented;
  const double change = std::max(with, without) / std::min(with, without);
  report("5", change <= 2.0,
         "f1 full-grid segmented Linf with phase 3 " + sci(with) + ", without " + sci(without) + ", factor " + sci(change) +
             " (<= 2)");
}

void criterion_2(const Run& f1, const Run& f2) {
  bool ok = true;
  std::string detail;
  for (const Run* r : {&f1, &f2}) {
    const std::size_t n = r->data.sites.size();
    const std::size_t after2 = *r->result.correct_after_blowup;
    const std::size_t final_ok = n - wrong_sites(*r, r->result.partition.label).size();
    ok = ok && 100 * after2 >= 98 * n && 1000 * final_ok >= 995 * n;
    detail += std::string(detail.empty() ? "" : "; ") + to_string(*r->data.truth) + " correct after phase 2 " +
              pct(after2, n) + " (>= 98%), after phase 3 " + pct(final_ok, n) + " (>= 99.5%)";
  }
  report("2", ok, detail);
}

void criterion_3(const Run& f4) {
  const auto wrong = wrong_sites(f4, f4.result.partition.label);
  double far = 0.0;
  for (PointId i : wrong) far = std::max(far, distance(f4.data.sites[i], {0.5, 0.5}));
  const double q = f4.result.q;
  const double seg = *f4.result.errors.linf_safe_segmented, glob = *f4.result.errors.linf_safe_global;
  report("3", wrong.size() <= 3 && far <= 2 * q && seg <= 1e-2 && glob >= 5e-3,
         "f4 misclassified " + std::to_string(wrong.size()) + " (<= 3), farthest " + sci(far) + " from singularity (<= 2q = " +
             sci(2 * q) + "), segmented " + sci(seg) + " (<= 1e-2), global " + sci(glob) + " (>= 5e-3)");
}

void criterion_4(const Run& f3) {
  const std::size_t n = f3.data.sites.size();
  const std::size_t agree = n - wrong_sites(f3, f3.result.partition.label).size();
  const double seg = *f3.result.errors.linf_safe_segmented, glob = *f3.result.errors.linf_safe_global;
  report("4", seg <= 0.5 && seg < glob && 100 * agree >= 99 * n,
         "f3 segmented " + sci(seg) + " (<= 0.5, < global " + sci(glob) + "), sign agreement " + pct(agree, n) +
             " (>= 99%)");
}

void criterion_6() {
  const Kernel k(KernelFamily::InverseMultiquadric, 0.35);
  std::mt19937_64 rng(601);
  std::uniform_int_distribution<std::size_t> size(1, 50);
  std::size_t residual_bad = 0;
  double worst_residual_ratio = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto pts = random_points(size(rng), rng, 0.03);
    const auto f = sample(pts);
    const Interpolant s = Interpolant::fit(k, pts, f);
    const double tol = Interpolant::residual_tolerance(f);
    const auto at = s.eval_many(pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double r = std::abs(at[i] - f[i]);
      worst_residual_ratio = std::max(worst_residual_ratio, r / tol);
      if (r > tol) ++residual_bad;
    }
  }

  double worst_norm_rel = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto pts = random_points(size(rng), rng, 0.03);
    const Interpolant s = Interpolant::fit(k, pts, sample(pts));
    std::vector<Point> piv;
    for (std::size_t i : s.pivot_order()) piv.push_back(pts[i]);
    const Eigen::MatrixXd a = gram_matrix(k, piv);
    const Eigen::VectorXd& c = s.standard_coeffs();
    const double quad = std::sqrt(c.dot(a * c));
    worst_norm_rel = std::max(worst_norm_rel, std::abs(quad - s.native_norm()) / s.native_norm());
  }

  std::size_t nest_bad = 0;
  for (int t = 0; t < 50; ++t) {
    const auto big = random_points(30, rng, 0.03);
    std::uniform_int_distribution<std::size_t> cut(1, big.size() - 1);
    const std::vector<Point> small(big.begin(), big.begin() + static_cast<std::ptrdiff_t>(cut(rng)));
    const double ns = Interpolant::fit(k, small, sample(small)).native_norm();
    const double nb = Interpolant::fit(k, big, sample(big)).native_norm();
    if (nb < ns * (1 - 1e-10)) ++nest_bad;
  }
  report("6", residual_bad == 0 && worst_norm_rel <= 1e-8 && nest_bad == 0,
         "kernel: sites over residual tolerance " + std::to_string(residual_bad) + " in 100 instances (worst residual/tol " +
             sci(worst_residual_ratio) + "), worst Newton-norm vs c^T A c rel. diff " + sci(worst_norm_rel) +
             " (<= 1e-8), nested-norm decreases " + std::to_string(nest_bad) + "/50");
}

void criterion_7() {
  std::mt19937_64 rng(701);
  std::uniform_int_distribution<std::size_t> size(2, 300);
  std::size_t knn_bad = 0, sep_bad = 0, fill_bad = 0;
  for (int t = 0; t < 100; ++t) {
    const auto pts = random_points(size(rng), rng, 0.0);
    const PointSet ps(pts);
    std::uniform_int_distribution<std::size_t> kdist(1, pts.size());
    const std::size_t kk = kdist(rng);
    for (const Point& q : random_points(5, rng, 0.0)) {
      std::vector<Neighbor> brute;
      for (PointId i = 0; i < pts.size(); ++i) brute.push_back({i, distance(q, pts[i])});
      std::sort(brute.begin(), brute.end(), neighbor_less);
      brute.resize(kk);
      const auto got = ps.k_nearest(q, kk);
      bool same = got.size() == brute.size();
      for (std::size_t i = 0; same && i < got.size(); ++i) same = got[i].id == brute[i].id && got[i].distance == brute[i].distance;
      if (!same) ++knn_bad;
    }
    double sep = INFINITY;
    for (PointId i = 0; i < pts.size(); ++i) {
      for (PointId j = i + 1; j < pts.size(); ++j) sep = std::min(sep, distance(pts[i], pts[j]));
    }
    if (separation_distance(ps) != sep) ++sep_bad;

    // Same probe lattice, brute-force nearest site.
    const double step = 0.02;
    double fill = 0.0;
    for (int iy = 0; iy <= 50; ++iy) {
      for (int ix = 0; ix <= 50; ++ix) {
        const Point p{ix * step, iy * step};
        double best = INFINITY;
        for (const Point& s : pts) best = std::min(best, distance(p, s));
        fill = std::max(fill, best);
      }
    }
    if (std::abs(fill_distance(ps, {{0, 0}, {1, 1}}, step) - fill) > 1e-12) ++fill_bad;
  }
  report("7", knn_bad == 0 && sep_bad == 0 && fill_bad == 0,
         "geometry: k_nearest mismatches " + std::to_string(knn_bad) + "/500 queries over 100 instances, separation " +
             std::to_string(sep_bad) + "/100, fill distance " + std::to_string(fill_bad) + "/100");
}

bool same_components_as_bfs(std::size_t n, const std::vector<Edge>& edges, const std::vector<bool>& good) {
  std::vector<PointId> ids;
  for (PointId i = 0; i < n; ++i) {
    if (good[i]) ids.push_back(i);
  }
  const ComponentLabeling cl = spanning_forest(filter_edges(edges, good), ids, n);
  std::vector<std::vector<PointId>> adj(n);
  for (const Edge& e : edges) {
    if (good[e.a] && good[e.b]) {
      adj[e.a].push_back(e.b);
      adj[e.b].push_back(e.a);
    }
  }
  std::vector<int> comp(n, 0);
  int count = 0;
  for (PointId s = 0; s < n; ++s) {
    if (!good[s] || comp[s] != 0) continue;
    comp[s] = ++count;
    std::queue<PointId> q;
    q.push(s);
    while (!q.empty()) {
      const PointId v = q.front();
      q.pop();
      for (PointId w : adj[v]) {
        if (comp[w] == 0) {
          comp[w] = count;
          q.push(w);
        }
      }
    }
  }
  // Both number components by smallest member, so labels must coincide.
  return cl.count == count && cl.label == comp;
}

bool partition_chain_holds(const PipelineResult& r) {
  try {
    check_partition(r.seeded);
    check_partition(r.after_blowup);
    check_final_partition(r.partition, r.after_blowup, !r.config.skip_phase3);
  } catch (const Error& e) {
    std::printf("      %s\n", e.what());
    return false;
  }
  for (std::size_t j = 0; j < r.seeded.class_count(); ++j) {
    const int cls = static_cast<int>(j + 1);
    for (PointId i : r.seeded.seeds[j]) {
      if (r.after_blowup.label[i] != cls) return false;
    }
    for (PointId i : r.after_blowup.grown[j]) {
      if (r.partition.label[i] != cls) return false;
    }
  }
  return r.after_blowup.seeds == r.seeded.seeds;
}

void criterion_8(const std::vector<const Run*>& runs) {
  std::mt19937_64 rng(801);
  std::uniform_int_distribution<std::size_t> size(2, 300);
  std::uniform_int_distribution<std::size_t> nn(2, 8);
  std::bernoulli_distribution coin(0.8);
  std::size_t bfs_bad = 0;
  for (int t = 0; t < 100; ++t) {
    const PointSet ps(random_points(size(rng), rng, 0.0));
    const auto edges = neighbor_edge_list(ps, std::min(nn(rng), ps.size()));
    std::vector<bool> good(ps.size());
    for (std::size_t i = 0; i < good.size(); ++i) good[i] = coin(rng);
    if (!same_components_as_bfs(ps.size(), edges, good)) ++bfs_bad;
  }
  std::size_t chain_bad = 0;
  for (const Run* r : runs) {
    if (!partition_chain_holds(r->result)) ++chain_bad;
  }
  report("8", bfs_bad == 0 && chain_bad == 0,
         "splitting: components differing from BFS " + std::to_string(bfs_bad) +
             "/100 graphs; partition chain violations " + std::to_string(chain_bad) + "/" + std::to_string(runs.size()) +
             " benchmark runs");
}

void criterion_9(const Run& f1) {
  const Run again = run_case(BenchCase::F1);
  const bool classes = classes_csv(f1.result, f1.data) == classes_csv(again.result, again.data);
  const bool rep = report_json(f1.result, f1.data) == report_json(again.result, again.data);
  report("9", classes && rep,
         std::string("determinism on f1: classes.csv ") + (classes ? "identical" : "differs") + ", report.json " +
             (rep ? "identical" : "differs"));
}

}  // namespace

int main() {
  try {
    const Run f1 = run_case(BenchCase::F1);
    const Run f2 = run_case(BenchCase::F2);
    const Run f3 = run_case(BenchCase::F3);
    const Run f4 = run_case(BenchCase::F4);
    criterion_1(f1);
    criterion_2(f1, f2);
    criterion_3(f4);
    criterion_4(f3);
    criterion_5(f1);
    criterion_6();
    criterion_7();
    criterion_8({&f1, &f2, &f3, &f4});
    criterion_9(f1);
  } catch (const std::exception& e) {
    std::printf("FAIL  --  aborted: %s\n", e.what());
    return 1;
  }
  std::printf("%s: %d criterion(s) failed\n", failures == 0 ? "OK" : "FAILED", failures);
  return failures == 0 ? 0 : 1;
}
