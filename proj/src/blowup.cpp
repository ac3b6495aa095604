#include "adaptseg/blowup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "adaptseg/error.hpp"

namespace adaptseg {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::Unassigned: return "unsure";
    case Provenance::Seed: return "seed";
    case Provenance::Blowup: return "blowup";
    case Provenance::Final: return "final";
  }
  return "?";
}

ClassState ClassState::from_components(const ComponentLabeling& components, std::span<const double> sigma) {
  if (sigma.size() != components.label.size()) fail(ErrorKind::InvalidArgument, "indicator and label counts differ");
  ClassState state;
  state.seeds = components.members();
  state.grown = state.seeds;
  state.label = components.label;
  state.provenance.assign(state.label.size(), Provenance::Unassigned);
  for (PointId i = 0; i < state.label.size(); ++i) {
    if (state.label[i] > 0) {
      state.provenance[i] = Provenance::Seed;
    } else {
      state.unsure.push_back(i);
    }
  }
  std::stable_sort(state.unsure.begin(), state.unsure.end(),
                   [&](PointId a, PointId b) { return sigma[a] < sigma[b]; });
  return state;
}

void check_partition(const ClassState& state) {
  const std::size_t n = state.label.size();
  auto broken = [](const std::string& what) { fail(ErrorKind::Internal, "partition invariant violated: " + what); };
  if (state.seeds.size() != state.grown.size()) broken("seed and grown class counts differ");
  if (state.provenance.size() != n) broken("provenance size mismatch");
  std::vector<int> owner(n, 0);
  for (std::size_t j = 0; j < state.grown.size(); ++j) {
    const int cls = static_cast<int>(j + 1);
    for (PointId i : state.grown[j]) {
      if (i >= n) broken("member id out of range");
      if (owner[i] != 0) broken("site " + std::to_string(i + 1) + " belongs to two sets");
      owner[i] = cls;
      if (state.label[i] != cls) broken("label of site " + std::to_string(i + 1) + " disagrees with membership");
    }
    for (PointId i : state.seeds[j]) {
      if (i >= n || owner[i] != cls) broken("seed site " + std::to_string(i + 1) + " missing from its grown set");
      if (state.provenance[i] != Provenance::Seed) broken("seed site without seed provenance");
    }
  }
  for (PointId i : state.unsure) {
    if (i >= n) broken("unsure id out of range");
    if (owner[i] != 0) broken("site " + std::to_string(i + 1) + " is both unsure and classified");
    owner[i] = -1;
  }
  for (PointId i = 0; i < n; ++i) {
    if (owner[i] == 0) broken("site " + std::to_string(i + 1) + " is not covered");
    if (owner[i] == -1 && state.label[i] != 0) broken("unsure site carries a label");
  }
}

Blowup::Blowup(const PointSet& ps, std::span<const double> f, const Kernel& kernel, const ClassState& state,
               BlowupOptions opts)
    : ps_(ps), f_(f), kernel_(kernel), opts_(opts) {
  if (f.size() != ps.size() || state.size() != ps.size()) fail(ErrorKind::InvalidArgument, "blow-up input sizes differ");
  if (opts_.n_neighbors < 1) fail(ErrorKind::Config, "blow-up neighborhood size must be positive");
  if (opts_.m_candidates < 1) fail(ErrorKind::Config, "number of candidate classes must be positive");
  seed_trees_.reserve(state.seeds.size());
  for (const auto& seed : state.seeds) {
    if (seed.empty()) fail(ErrorKind::InvalidArgument, "empty seed set");
    seed_trees_.emplace_back(ps.points(), seed);
  }
}

double Blowup::distance_to_class(const ClassState& state, PointId i, int cls) const {
  double best = std::numeric_limits<double>::infinity();
  for (PointId k : state.grown[static_cast<std::size_t>(cls - 1)]) best = std::min(best, squared_distance(ps_[i], ps_[k]));
  return std::sqrt(best);
}

double Blowup::fit_norm(std::span<const PointId> ids) const {
  std::vector<Point> pts;
  std::vector<double> vals;
  pts.reserve(ids.size());
  vals.reserve(ids.size());
  for (PointId id : ids) {
    pts.push_back(ps_[id]);
    vals.push_back(f_[id]);
  }
  return Interpolant::fit(kernel_, pts, vals).native_norm();
}

double Blowup::seed_norm(int cls, PointId anchor) {
  // Seed sets are disjoint, so the anchor alone identifies the cache entry.
  if (auto it = seed_norm_cache_.find(anchor); it != seed_norm_cache_.end()) return it->second;
  std::vector<PointId> ids;
  for (const Neighbor& nb : seed_trees_[static_cast<std::size_t>(cls - 1)].k_nearest(ps_[anchor], opts_.n_neighbors)) {
    ids.push_back(nb.id);
  }
  const double norm = fit_norm(ids);
  seed_norm_cache_.emplace(anchor, norm);
  return norm;
}

CandidateQuotient Blowup::quotient(const ClassState& state, PointId i, int cls) {
  if (cls < 1 || static_cast<std::size_t>(cls) > state.class_count()) fail(ErrorKind::InvalidArgument, "class id out of range");
  CandidateQuotient q;
  q.cls = cls;
  q.anchor = seed_trees_[static_cast<std::size_t>(cls - 1)].nearest(ps_[i]).id;
  q.sigma_seed = seed_norm(cls, q.anchor);

  const auto& grown = state.grown[static_cast<std::size_t>(cls - 1)];
  std::vector<Neighbor> near;
  near.reserve(grown.size());
  for (PointId k : grown) near.push_back({k, distance(ps_[i], ps_[k])});
  const std::size_t take = std::min(near.size(), opts_.n_neighbors - 1);
  std::partial_sort(near.begin(), near.begin() + static_cast<std::ptrdiff_t>(take), near.end(), neighbor_less);
  q.distance = near.empty() ? std::numeric_limits<double>::infinity() : near.front().distance;

  std::vector<PointId> ids{i};
  for (std::size_t k = 0; k < take; ++k) ids.push_back(near[k].id);
  q.sigma_unsure = fit_norm(ids);

  if (q.sigma_seed > 0.0) {
    q.ratio = q.sigma_unsure / q.sigma_seed;
  } else {
    q.ratio = q.sigma_unsure > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  }
  return q;
}

std::vector<int> Blowup::candidates(const ClassState& state, PointId i) const {
  std::vector<std::pair<double, int>> by_distance;
  for (std::size_t j = 0; j < state.class_count(); ++j) {
    const int cls = static_cast<int>(j + 1);
    by_distance.emplace_back(distance_to_class(state, i, cls), cls);
  }
  std::sort(by_distance.begin(), by_distance.end());
  const std::size_t m = std::min(opts_.m_candidates, by_distance.size());
  std::vector<int> out;
  for (std::size_t k = 0; k < m; ++k) out.push_back(by_distance[k].second);
  return out;
}

std::size_t Blowup::run(ClassState& state, std::vector<BlowupTraceEntry>* trace) {
  std::size_t sweeps = 0;
  while (!state.unsure.empty()) {
    ++sweeps;
    bool moved_any = false;
    std::vector<PointId> still_unsure;
    for (PointId i : state.unsure) {
      const std::vector<int> cands = candidates(state, i);
      std::vector<CandidateQuotient> quotients;
      for (int cls : cands) quotients.push_back(quotient(state, i, cls));

      // The nearest class wins only with a strictly smallest quotient.
      const CandidateQuotient& nearest = quotients.front();
      const bool accept = std::all_of(quotients.begin() + 1, quotients.end(),
                                      [&](const CandidateQuotient& other) { return nearest.ratio < other.ratio; });
      if (accept) {
        state.grown[static_cast<std::size_t>(nearest.cls - 1)].push_back(i);
        state.label[i] = nearest.cls;
        state.provenance[i] = Provenance::Blowup;
        moved_any = true;
      } else {
        still_unsure.push_back(i);
      }
      if (trace != nullptr) trace->push_back({sweeps, i, accept ? nearest.cls : 0, std::move(quotients)});
    }
    state.unsure = std::move(still_unsure);
    check_partition(state);
    if (!moved_any || opts_.mode == BlowupMode::SinglePass) break;
  }
  return sweeps;
}

ClassState blow_up(const PointSet& ps, std::span<const double> f, const Kernel& kernel, ClassState state,
                   const BlowupOptions& opts, std::vector<BlowupTraceEntry>* trace) {
  Blowup engine(ps, f, kernel, state, opts);
  engine.run(state, trace);
  return state;
}

}  // namespace adaptseg
