#pragma once

// Shared fixtures for the building-level test suites: the standard Coxeter
// matrices and an extensional-snapshot helper that turns a ball of any
// building into LoadedBuilding input (optionally with deliberate damage).

#include <algorithm>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "bldg/building.hpp"

namespace bldg_test {

inline bldg::CoxeterMatrix sym3_matrix() {
  return bldg::CoxeterMatrix::dihedral(3);
}

inline bldg::CoxeterMatrix dinf_matrix() {
  return bldg::CoxeterMatrix::dihedral(0);
}

inline bldg::CoxeterMatrix a2_tilde_matrix() {
  return bldg::CoxeterMatrix(3, {1, 3, 3, 3, 1, 3, 3, 3, 1});
}

// Five generators in a cycle: consecutive ones commute, all other pairs are
// free.
inline bldg::CoxeterMatrix pentagon_matrix() {
  std::vector<int> e(25, 0);
  for (int i = 0; i < 5; ++i) {
    e[static_cast<std::size_t>(i) * 5 + i] = 1;
    e[static_cast<std::size_t>(i) * 5 + (i + 1) % 5] = 2;
    e[static_cast<std::size_t>((i + 1) % 5) * 5 + i] = 2;
  }
  return bldg::CoxeterMatrix(5, std::move(e));
}

/// A ball of some building, renumbered breadth-first, in the extensional
/// shape LoadedBuilding consumes.  Panels that stick out of the ball come
/// out partial; panels reduced to one member are left implicit.
struct BallSnapshot {
  std::int64_t count = 0;
  int radius = 0;
  std::vector<std::vector<std::vector<bldg::ChamberId>>> panels;
  std::vector<bldg::ChamberId> original;  // new id -> source chamber id
};

inline BallSnapshot snapshot_ball(bldg::Building& b, int radius) {
  BallSnapshot out;
  out.radius = radius;
  out.original = b.ball(b.base(), radius);
  out.count = static_cast<std::int64_t>(out.original.size());
  std::unordered_map<bldg::ChamberId, bldg::ChamberId> renum;
  for (std::size_t i = 0; i < out.original.size(); ++i)
    renum.emplace(out.original[i], static_cast<bldg::ChamberId>(i));
  out.panels.resize(static_cast<std::size_t>(b.rank()));
  for (int s = 0; s < b.rank(); ++s) {
    std::unordered_set<bldg::ChamberId> seen;
    for (bldg::ChamberId c : out.original) {
      std::vector<bldg::ChamberId> group;
      for (bldg::ChamberId m : b.panel(c, s)) {
        auto it = renum.find(m);
        if (it != renum.end()) group.push_back(it->second);
      }
      if (group.size() < 2) continue;
      std::sort(group.begin(), group.end());
      if (!seen.insert(group.front()).second) continue;
      out.panels[static_cast<std::size_t>(s)].push_back(std::move(group));
    }
  }
  return out;
}

/// Removes one chamber from its s-panel group, modelling a missing panel
/// edge; the chamber falls back to an implicit singleton panel.
inline BallSnapshot drop_panel_member(BallSnapshot snap, int s,
                                      bldg::ChamberId victim) {
  auto& groups = snap.panels.at(static_cast<std::size_t>(s));
  for (auto it = groups.begin(); it != groups.end(); ++it) {
    auto pos = std::find(it->begin(), it->end(), victim);
    if (pos == it->end()) continue;
    it->erase(pos);
    if (it->size() < 2) groups.erase(it);
    return snap;
  }
  throw std::logic_error("victim chamber sits in no listed panel");
}

inline std::shared_ptr<bldg::LoadedBuilding> load_snapshot(
    const BallSnapshot& snap,
    std::shared_ptr<const bldg::CoxeterSystem> system, int declared_radius) {
  return std::make_shared<bldg::LoadedBuilding>(
      std::move(system), snap.count, declared_radius, snap.panels);
}

}  // namespace bldg_test
