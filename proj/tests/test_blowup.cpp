#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "adaptseg/blowup.hpp"
#include "adaptseg/error.hpp"
#include "adaptseg/pipeline.hpp"

using namespace adaptseg;

namespace {

const Kernel kImq(KernelFamily::InverseMultiquadric, 0.35);

// labels: 0 unsure, j > 0 seed of class j.
ClassState make_state(const std::vector<int>& labels, const std::vector<double>& sigma) {
  ComponentLabeling cl;
  cl.label = labels;
  cl.count = *std::max_element(labels.begin(), labels.end());
  cl.sizes.assign(static_cast<std::size_t>(cl.count), 0);
  for (int l : labels) {
    if (l > 0) ++cl.sizes[static_cast<std::size_t>(l - 1)];
  }
  return ClassState::from_components(cl, sigma);
}

// Native norm through a dense solve of the Gram system.
double dense_norm(const PointSet& ps, const std::vector<double>& f, const std::vector<PointId>& ids) {
  const auto n = static_cast<Eigen::Index>(ids.size());
  Eigen::MatrixXd a(n, n);
  Eigen::VectorXd v(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    v(r) = f[ids[static_cast<std::size_t>(r)]];
    for (Eigen::Index c = 0; c < n; ++c) a(r, c) = kImq(ps[ids[static_cast<std::size_t>(r)]], ps[ids[static_cast<std::size_t>(c)]]);
  }
  return std::sqrt(v.dot(a.ldlt().solve(v)));
}

// Ids of `pool` sorted by (distance to p, id), truncated to k.
std::vector<PointId> nearest_of(const PointSet& ps, Point p, std::vector<PointId> pool, std::size_t k) {
  std::sort(pool.begin(), pool.end(), [&](PointId a, PointId b) {
    return neighbor_less({a, distance(p, ps[a])}, {b, distance(p, ps[b])});
  });
  pool.resize(std::min(k, pool.size()));
  return pool;
}

// Two 5x5 clusters, left on x in [0, 0.2] and right on x in [0.6, 0.8],
// followed by any extra sites.
struct TwoClusters {
  std::vector<Point> pts;
  std::vector<double> f;
  std::vector<int> labels;
  TwoClusters(double left_value, double right_value) {
    for (int side = 0; side < 2; ++side) {
      for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
          pts.push_back({side * 0.6 + i * 0.05, j * 0.05});
          f.push_back(side == 0 ? left_value + 0.1 * j * 0.05 : right_value + 0.1 * j * 0.05);
          labels.push_back(side + 1);
        }
      }
    }
  }
  void add(Point p, double v) {
    pts.push_back(p);
    f.push_back(v);
    labels.push_back(0);
  }
};

}  // namespace

TEST(Quotient, ConsistentInteriorSiteIsNearOne) {
  std::vector<Point> pts;
  std::vector<double> f;
  std::vector<int> labels;
  for (int i = 0; i < 9; ++i) {
    for (int j = 0; j < 9; ++j) {
      pts.push_back({i / 8.0, j / 8.0});
      f.push_back(std::sin(pts.back().x) + pts.back().y);
      labels.push_back(i == 4 && j == 4 ? 0 : 1);
    }
  }
  const PointSet ps(pts);
  const ClassState state = make_state(labels, std::vector<double>(pts.size(), 1.0));
  Blowup engine(ps, f, kImq, state, {});
  const auto q = engine.quotient(state, 40, 1);
  EXPECT_NEAR(q.ratio, 1.0, 0.1);
}

TEST(Quotient, JumpBlowsUpTheNormAndMatchesDenseOracle) {
  TwoClusters tc(1.0, 2.0);
  tc.add({0.25, 0.1}, 2.0);
  const PointSet ps(tc.pts);
  const ClassState state = make_state(tc.labels, std::vector<double>(tc.pts.size(), 1.0));
  Blowup engine(ps, tc.f, kImq, state, {});
  const PointId x = 50;
  const auto q = engine.quotient(state, x, 1);

  const auto& seed = state.seeds[0];
  const PointId anchor = nearest_of(ps, ps[x], seed, 1)[0];
  const double sigma_g = dense_norm(ps, tc.f, nearest_of(ps, ps[anchor], seed, 12));
  std::vector<PointId> yu{x};
  for (PointId k : nearest_of(ps, ps[x], state.grown[0], 11)) yu.push_back(k);
  const double sigma_u = dense_norm(ps, tc.f, yu);

  EXPECT_EQ(q.anchor, anchor);
  EXPECT_NEAR(q.sigma_seed, sigma_g, 1e-6 * sigma_g);
  EXPECT_NEAR(q.sigma_unsure, sigma_u, 1e-6 * sigma_u);
  EXPECT_GT(q.ratio, 5.0);

  // The same site with a consistent value barely moves the norm.
  TwoClusters ok(1.0, 2.0);
  ok.add({0.25, 0.1}, 1.01);
  const PointSet ps2(ok.pts);
  Blowup engine2(ps2, ok.f, kImq, state, {});
  EXPECT_LT(engine2.quotient(state, x, 1).ratio, 1.5);
}

TEST(Quotient, SingleSeedClosedForm) {
  const std::vector<Point> pts = {{0, 0}, {0.1, 0.05}, {5, 5}};
  const std::vector<double> f = {3.0, 3.0, -1.0};
  const PointSet ps(pts);
  const ClassState state = make_state({1, 0, 2}, {1, 1, 1});
  Blowup engine(ps, f, kImq, state, {});
  const auto q = engine.quotient(state, 1, 1);
  const double k = kImq(pts[0], pts[1]);
  EXPECT_NEAR(q.sigma_seed, 3.0, 1e-12);
  EXPECT_NEAR(q.ratio, std::sqrt(2 / (1 + k)), 1e-9);
  EXPECT_GE(q.ratio, 1.0);
  EXPECT_LE(q.ratio, 1.5);
}

TEST(Quotient, ZeroSeedNormSentinel) {
  TwoClusters tc(0.0, 1.0);
  for (std::size_t i = 0; i < 25; ++i) tc.f[i] = 0.0;
  tc.add({0.25, 0.1}, 0.0);
  tc.add({0.25, 0.15}, 0.5);
  const PointSet ps(tc.pts);
  const ClassState state = make_state(tc.labels, std::vector<double>(tc.pts.size(), 1.0));
  Blowup engine(ps, tc.f, kImq, state, {});
  EXPECT_EQ(engine.quotient(state, 50, 1).ratio, 1.0);
  EXPECT_EQ(engine.quotient(state, 51, 1).ratio, INFINITY);
  EXPECT_THROW(engine.quotient(state, 50, 3), Error);
}

TEST(BlowUp, EmptyUnsureIsIdentity) {
  TwoClusters tc(1.0, 2.0);
  const PointSet ps(tc.pts);
  const ClassState state = make_state(tc.labels, std::vector<double>(tc.pts.size(), 1.0));
  std::vector<BlowupTraceEntry> trace;
  const ClassState out = blow_up(ps, tc.f, kImq, state, {}, &trace);
  EXPECT_EQ(out.grown, state.grown);
  EXPECT_EQ(out.label, state.label);
  EXPECT_TRUE(trace.empty());
}

TEST(BlowUp, ConsistentSiteJoinsItsClass) {
  TwoClusters tc(1.0, 2.0);
  tc.add({0.39, 0.1}, 1.01);  // 0.19 from the left cluster, 0.21 from the right
  const PointSet ps(tc.pts);
  const ClassState state = make_state(tc.labels, std::vector<double>(tc.pts.size(), 1.0));
  Blowup engine(ps, tc.f, kImq, state, {});
  const double q1 = engine.quotient(state, 50, 1).ratio;
  const double q2 = engine.quotient(state, 50, 2).ratio;
  EXPECT_LT(q1, q2);
  const ClassState out = blow_up(ps, tc.f, kImq, state, {});
  EXPECT_EQ(out.label[50], 1);
  EXPECT_EQ(out.provenance[50], Provenance::Blowup);
  EXPECT_TRUE(out.unsure.empty());
}

TEST(BlowUp, InconsistentNearestClassLeavesSiteUnsure) {
  TwoClusters tc(1.0, 2.0);
  tc.add({0.41, 0.1}, 1.01);  // nearer the right cluster, value of the left
  const PointSet ps(tc.pts);
  const ClassState state = make_state(tc.labels, std::vector<double>(tc.pts.size(), 1.0));
  std::vector<BlowupTraceEntry> trace;
  const ClassState out = blow_up(ps, tc.f, kImq, state, {}, &trace);
  EXPECT_EQ(out.label[50], 0);
  EXPECT_EQ(out.unsure, (std::vector<PointId>{50}));
  ASSERT_EQ(trace.size(), 1u);
  EXPECT_EQ(trace[0].chosen, 0);
  EXPECT_EQ(trace[0].quotients.front().cls, 2);
}

TEST(BlowUp, ExactTieStaysUnsure) {
  // Mirror-image classes with identical data and the unsure site on the
  // mirror axis: both quotients coincide, so the strict rule rejects.
  std::vector<Point> pts;
  std::vector<double> f;
  std::vector<int> labels;
  for (int side = 0; side < 2; ++side) {
    for (int i = 1; i <= 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        pts.push_back({(side == 0 ? -1.0 : 1.0) * i * 0.1, j * 0.1});
        f.push_back(1.0 + j * 0.1);
        labels.push_back(side + 1);
      }
    }
  }
  pts.push_back({0.0, 0.1});
  f.push_back(1.1);
  labels.push_back(0);
  const PointSet ps(pts);
  const ClassState state = make_state(labels, std::vector<double>(pts.size(), 1.0));
  Blowup engine(ps, f, kImq, state, {.n_neighbors = 9});
  ASSERT_EQ(engine.quotient(state, 18, 1).ratio, engine.quotient(state, 18, 2).ratio);
  const ClassState out = blow_up(ps, f, kImq, state, {.n_neighbors = 9});
  EXPECT_EQ(out.label[18], 0);
}

TEST(BlowUp, CandidatesFollowGrownDistance) {
  TwoClusters tc(1.0, 2.0);
  tc.add({0.39, 0.1}, 1.01);
  tc.add({0.5, 5.0}, 0.0);
  const PointSet ps(tc.pts);
  ClassState state = make_state(tc.labels, std::vector<double>(tc.pts.size(), 1.0));
  Blowup one(ps, tc.f, kImq, state, {.m_candidates = 1});
  EXPECT_EQ(one.candidates(state, 50), (std::vector<int>{1}));
  Blowup three(ps, tc.f, kImq, state, {.m_candidates = 3});
  EXPECT_EQ(three.candidates(state, 50), (std::vector<int>{1, 2}));
  EXPECT_NEAR(three.distance_to_class(state, 50, 2), 0.21, 1e-12);
}

TEST(BlowUp, RejectsBadInput) {
  TwoClusters tc(1.0, 2.0);
  const PointSet ps(tc.pts);
  const ClassState state = make_state(tc.labels, std::vector<double>(tc.pts.size(), 1.0));
  EXPECT_THROW(Blowup(ps, tc.f, kImq, state, {.n_neighbors = 0}), Error);
  EXPECT_THROW(Blowup(ps, tc.f, kImq, state, {.m_candidates = 0}), Error);
  const std::vector<double> short_f(3, 0.0);
  EXPECT_THROW(Blowup(ps, short_f, kImq, state, {}), Error);
}

TEST(CheckPartition, DetectsViolations) {
  TwoClusters tc(1.0, 2.0);
  tc.add({0.39, 0.1}, 1.0);
  ClassState state = make_state(tc.labels, std::vector<double>(tc.pts.size(), 1.0));
  EXPECT_NO_THROW(check_partition(state));
  ClassState dup = state;
  dup.grown[1].push_back(0);
  EXPECT_THROW(check_partition(dup), Error);
  ClassState lost = state;
  lost.unsure.clear();
  EXPECT_THROW(check_partition(lost), Error);
  ClassState unlabeled = state;
  unlabeled.label[3] = 2;
  EXPECT_THROW(check_partition(unlabeled), Error);
}

TEST(ClassState, UnsureOrderedBySigma) {
  const ClassState state = make_state({1, 0, 0, 0, 2}, {0, 3.0, 1.0, 3.0, 0});
  EXPECT_EQ(state.unsure, (std::vector<PointId>{2, 1, 3}));
  EXPECT_EQ(state.classified_count(), 2u);
}

class BlowupOnBenchmark : public ::testing::TestWithParam<BenchCase> {};

TEST_P(BlowupOnBenchmark, InvariantsAndTrace) {
  PipelineConfig cfg;
  const Dataset data = make_case_dataset(GetParam(), cfg);
  const PipelineResult r = run_pipeline(cfg, data);
  const ClassState& before = r.seeded;
  const ClassState& after = r.after_blowup;

  EXPECT_EQ(after.seeds, before.seeds);
  for (std::size_t j = 0; j < before.class_count(); ++j) {
    for (PointId i : before.grown[j]) EXPECT_EQ(after.label[i], static_cast<int>(j + 1));
  }
  EXPECT_LE(after.unsure.size(), before.unsure.size());
  for (PointId i : after.unsure) EXPECT_NE(std::find(before.unsure.begin(), before.unsure.end(), i), before.unsure.end());
  EXPECT_LE(r.blowup_sweeps, before.unsure.size() + 1);

  // Replay: each decision follows the strict rule on the logged quotients,
  // candidates are listed nearest first, and moves match the final labels.
  std::vector<int> label = before.label;
  for (const auto& e : r.trace) {
    ASSERT_FALSE(e.quotients.empty());
    for (std::size_t k = 1; k < e.quotients.size(); ++k) {
      EXPECT_LE(e.quotients[k - 1].distance, e.quotients[k].distance);
    }
    const bool strict = std::all_of(e.quotients.begin() + 1, e.quotients.end(),
                                    [&](const CandidateQuotient& c) { return e.quotients[0].ratio < c.ratio; });
    EXPECT_EQ(e.chosen != 0, strict);
    if (e.chosen != 0) {
      EXPECT_EQ(e.chosen, e.quotients[0].cls);
      EXPECT_EQ(label[e.point], 0);
      label[e.point] = e.chosen;
    }
  }
  EXPECT_EQ(label, after.label);
}

INSTANTIATE_TEST_SUITE_P(Cases, BlowupOnBenchmark,
                         ::testing::Values(BenchCase::F1, BenchCase::F2, BenchCase::F3, BenchCase::F4),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(BlowUp, SinglePassRunsOnceAndClassifiesNoMore) {
  PipelineConfig cfg;
  const Dataset data = make_case_dataset(BenchCase::F1, cfg);
  const PipelineResult fix = run_pipeline(cfg, data);
  cfg.blowup_mode = BlowupMode::SinglePass;
  const PipelineResult once = run_pipeline(cfg, data);
  EXPECT_EQ(once.blowup_sweeps, 1u);
  EXPECT_LE(once.classified_after_blowup, fix.classified_after_blowup);
  for (const auto& e : once.trace) EXPECT_EQ(e.sweep, 1u);
}
