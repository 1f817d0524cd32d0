#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "bldg/building.hpp"

namespace bldg {

struct AxiomViolation {
  std::string axiom;       // "WD1" | "WD2" | "WD3" | "gate" | "retraction"
  ChamberId source = -1;   // the viewpoint chamber, -1 for global findings
  ChamberId chamber = -1;  // the panel chamber or pair partner
  int generator = -1;
  std::string detail;
};

struct AxiomReport {
  std::string check;
  std::int64_t sources = 0;  // viewpoint chambers scanned
  std::int64_t cells = 0;    // (source, panel) cells checked
  std::int64_t pairs = 0;    // chamber pairs checked (retraction only)
  std::int64_t skipped = 0;  // sources skipped because a Weyl distance
                             // could not be certified within the data
  std::int64_t violation_count = 0;
  std::vector<AxiomViolation> violations;  // first kMaxRecorded of them
  static constexpr std::size_t kMaxRecorded = 32;

  bool ok() const { return violation_count == 0; }
  std::string summary() const;
};

/// Checks the Weyl-distance axioms on a truncated ball: viewpoints range
/// over ball(base, radius) and panels over chambers of ball(base,
/// radius - 1), so every panel scanned lies fully inside the viewpoint
/// scope.  For each viewpoint y and panel P it checks that the distances
/// delta(y, .) on P form the unique legal pattern: one gate value v,
/// every other member at v*s with length going up.  Deviations are
/// classified: a value outside {v, v*s} breaks WD2, a duplicated gate
/// with the ascent present breaks the forced-ascent half of WD2, a
/// missing ascent or descent breaks WD3, and a panel that is a singleton
/// can never realize its other Weyl distances (WD3).  delta(y, c) = e for
/// y != c breaks WD1.
AxiomReport verify_building_axioms(Building& b, int radius);

/// Same scan, lengths only: every panel must have a unique nearest
/// chamber (the gate) with all other members exactly one step farther.
AxiomReport check_gate_property(Building& b, int radius);

/// Checks the retraction onto an apartment through the base: in
/// coordinates u_c = delta(base, c) the retraction maps c to the
/// apartment chamber at u_c, so it preserves distances from the base and
/// must not increase any distance: l(u_c^-1 u_d) <= d(c, d) for all pairs
/// in ball(base, radius).  On an inner ball it also materializes the
/// apartment as a chart and re-checks image distances chamber-level.
AxiomReport check_retraction(const std::shared_ptr<Building>& b, int radius);

}  // namespace bldg
