#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "bldg/apartment.hpp"
#include "bldg/building.hpp"
#include "bldg/coxeter.hpp"

namespace bldg {

/// A wall tied to a boundary direction: a reflection (in the coordinate
/// frame of the direction's chart center) whose wall is invariant under some
/// power of the period element.  Invariant walls are never crossed by the
/// axis, so they run alongside it all the way out.
struct DirectionWall {
  Reflection wall;
  int period = 0;          // least k >= 1 with u^k wall u^-k == wall
  bool base_side = false;  // side(wall, e), recorded for downstream queries
};

/// A boundary direction: a periodic straight ray inside a designated
/// apartment chart.  The base chamber sits at coordinate e; the axis visits
/// u^n for n = 0..window, materialized in the direction's own chart copy.
/// The straightness certificate guarantees the concatenated axis word stays
/// reduced, which is exactly the statement that the axis crosses every wall
/// at most once.
///
/// `window` bounds every periodicity search: direction walls are found by
/// scanning the chamber neighborhood { u^i p : i <= window, |p| <= window }
/// and testing u-conjugation up to window, which is exact for every wall
/// relevant to a radius-R computation whenever window >= R (a wall
/// separating two chambers of ball(e, R) also separates e from one of them,
/// so some ShortLex geodesic from e crosses it between chambers that both
/// stay inside the ball).
///
/// Directions are immutable after construction and safe to share across
/// threads; queries that need to grow a chart copy the direction's chart
/// first.
class Direction {
 public:
  const std::shared_ptr<Building>& building_ptr() const noexcept {
    return building_;
  }
  Building& building() const noexcept { return *building_; }
  const CoxeterSystem& system() const noexcept { return building_->system(); }
  const ApartmentChart& chart() const noexcept { return *chart_; }
  ChamberId base() const noexcept { return base_; }
  const GroupElement& period() const noexcept { return period_; }
  int window() const noexcept { return window_; }

  /// The chamber at coordinate u^n in the direction's chart, 0 <= n <= window.
  ChamberId axis_chamber(int n) const;
  /// period() to the n-th power, 0 <= n <= window + 1.
  const GroupElement& period_power(int n) const;

  /// Direction walls in ShortLex order of their reflection words.
  const std::vector<DirectionWall>& walls() const noexcept { return walls_; }
  /// True when the reflection's normal form is a direction wall.
  bool is_direction_wall(const Word& reflection_nf) const;

 private:
  friend Direction make_direction(const ApartmentChart& chart, ChamberId base,
                                  const GroupElement& period, int window);
  Direction() = default;

  std::shared_ptr<Building> building_;
  std::shared_ptr<ApartmentChart> chart_;  // private copy, axis materialized
  ChamberId base_ = -1;
  GroupElement period_;
  int window_ = 0;
  std::vector<GroupElement> powers_;       // u^0 .. u^(window+1)
  std::vector<ChamberId> axis_;            // chambers at u^0 .. u^window
  std::vector<DirectionWall> walls_;
};

/// Builds a direction from a chart, its center chamber, and a period
/// element.  The period must pass the straightness certificate out to
/// max(window + 1, kStraightPower) (so a single generator, or any torsion
/// element, is rejected), and the base must be the chart's center (the one
/// chamber at coordinate e).  Throws Error on certificate failure and
/// std::invalid_argument on contract violations.
Direction make_direction(const ApartmentChart& chart, ChamberId base,
                         const GroupElement& period, int window);

/// The direction's wall set (already computed at construction).
inline const std::vector<DirectionWall>& walls_eta(const Direction& dir) {
  return dir.walls();
}

/// A chart centered on axis chamber n0 with the rest of the axis window
/// pinned at its relative coordinates u^(m - n0).  Every apartment realizing
/// such a chart contains a tail of the axis, hence a ray in the direction.
ApartmentChart axis_frame_chart(const Direction& dir, int n0);

/// A chart that reached some targets, remembering which axis recentering it
/// started from.  Coordinates are relative to axis chamber n0; conjugating
/// by u^n0 moves walls between this frame and the base frame.
struct AxisFrame {
  ApartmentChart chart;
  int n0 = 0;
};

/// The first axis recentering (n0 = 0..window) whose chart extends to all
/// targets.  Thick panels can put a target at the same coordinate as an
/// axis chamber, in which case the chart centered there cannot hold both;
/// viewed from further along the axis the coordinates can separate again.
/// Returns nullopt when no recentering works.
std::optional<AxisFrame> find_axis_frame(const Direction& dir,
                                         const std::vector<ChamberId>& targets);

/// A base-frame wall expressed in the frame centered on axis chamber n0:
/// u^-n0 t u^n0.  Separation of chambers is preserved: t separates two
/// base-frame coordinates iff the pulled wall separates the shifted ones.
Reflection wall_in_frame(const Direction& dir, const Reflection& t, int n0);

/// A frame-n0 wall expressed back in the base frame: u^n0 t u^-n0.
Reflection wall_in_base(const Direction& dir, const Reflection& t, int n0);

/// The side of each direction wall (in walls() order) held by chamber x:
/// true means the same side as the direction's base chamber.  Sides are
/// read in the first frame that reaches x, with x's coordinate pushed back
/// into the base frame; no axis chamber is separated from the base by a
/// direction wall, so the recentering does not disturb the answer.  Returns
/// nullopt when no frame reaches x.
std::optional<std::vector<bool>> wall_sides(ChamberId x, const Direction& dir);

/// A combinatorial ray: a materialized gallery prefix followed by a
/// periodic tail descriptor.  Coordinates live in `chart`, whose center is
/// the direction's axis chamber number `frame` (coordinates relative to the
/// base frame are shifted left by u^frame).  The tail visits coordinates
/// u^n * tail_coord for n >= 0; its chambers are materialized on demand by
/// materialize_ray.  Copies share the chart.
struct CgrRay {
  std::vector<ChamberId> prefix;    // chambers; front() is the origin
  std::vector<Word> prefix_coords;  // parallel coordinates in `chart`
  Word tail_coord;                  // == prefix_coords.back()
  Word tail_base_frame;             // tail_coord shifted into the base frame
  GroupElement period;
  int frame = 0;
  int horizon = 0;                  // periods over which CGR-ness was checked
  std::shared_ptr<ApartmentChart> chart;

  ChamberId origin() const { return prefix.front(); }
};

/// Chambers of the ray out to `periods` full periods past the tail base:
/// the prefix followed by the chambers at u^1..u^periods * tail_coord,
/// materialized in the ray's chart (which grows).  Throws HorizonError or
/// TruncationError when the building data cannot realize the tail that far.
std::vector<ChamberId> materialize_ray(CgrRay& ray, int periods);

/// True iff the walk visits chart chambers along panel steps and crosses no
/// wall twice.  Paths of length <= 1 are trivially rays.  Throws Error when
/// a chamber is not in the chart and std::invalid_argument when consecutive
/// chambers are not panel-adjacent.
bool is_cgr(const std::vector<ChamberId>& path, const ApartmentChart& chart);

/// The same test for a prefix+tail ray, with the tail unrolled over
/// max(ray.horizon, dir.window()) periods.
bool is_cgr(const CgrRay& ray, const Direction& dir);

/// True iff no direction wall separates x from y, tested in a chart that
/// contains x, y, and a tail of the axis.  The chart search recenters on
/// axis chambers u^n0 (n0 = 0..window) until one extends to both chambers;
/// walls are pulled into the shifted frame by conjugation.  Throws
/// HorizonError("no common compatible chart within horizon...") when no
/// recentering works — deliberately distinct from returning false.
bool phi_equal(ChamberId x, ChamberId y, const Direction& dir);

/// The connected component of x in the graph on ball(dir.base(), radius)
/// whose edges are panel-adjacent pairs not separated by a direction wall.
/// An adjacent pair with no compatible chart contributes no edge, never an
/// error.  Returns sorted chamber ids.  Because balls are not convex, one
/// equivalence class can fall apart into several components when the radius
/// cuts off a connecting detour; compare classes on an inner ball with the
/// component scan run at a larger radius.
std::vector<ChamberId> phi_class(ChamberId x, const Direction& dir,
                                 int radius);

/// A ray from x that crosses no direction wall: a gallery prefix to a tail
/// base plus a periodic tail, every crossed wall distinct (checked over
/// `horizon` periods with a one-period stabilization margin).  Candidate
/// tail bases are enumerated in ShortLex order (axis neighborhood first,
/// then sidesteps of x), so the returned ray is the least witness.  Throws
/// HorizonError when the search space is exhausted.
CgrRay straight_surrogate(ChamberId x, const Direction& dir, int horizon);

/// Verdict of the search for a ray from x through y toward the direction.
struct ExtendVerdict {
  std::optional<CgrRay> ray;  // set iff a witness was found
  bool definite = false;      // true: witness, or every candidate ruled out
                              // false: inconclusive within the horizon
  bool witness() const { return ray.has_value(); }
};

/// Searches for a combinatorial ray from x through y toward the direction:
/// a minimal gallery x -> y, a connecting gallery y -> tail base, and a
/// periodic tail, with pairwise disjoint crossed-wall sets.  Any minimal
/// gallery x -> y crosses exactly the walls separating x from y, so only
/// that set matters, never the gallery choice.  The witness, when found, is
/// assembled from ShortLex-least words.  A definite negative means every
/// candidate tail collided with the separating walls; an indefinite result
/// means some candidate failed for chart/truncation reasons instead.
ExtendVerdict extend_to_cgr(ChamberId x, ChamberId y, const Direction& dir,
                            int horizon);

/// The constant side of each direction wall (walls() order) held by a ray's
/// periodic tail, measured in the base frame; true means the base chamber's
/// side.  A valid tail never crosses a direction wall, so its side is
/// constant; throws StabilizationError for a tail that does cross one.
std::vector<bool> tail_sides(const CgrRay& ray, const Direction& dir);

/// True iff the two rays' tails lie on the same side of every direction
/// wall.  A valid periodic tail never crosses a direction wall (wall
/// invariance makes any crossing repeat every period, which no ray crossing
/// each wall once can afford), so each tail holds one side of each wall for
/// good; the check verifies that non-crossing over one full window — exact
/// by periodicity — and raises StabilizationError for a tail that does
/// cross, since such a tail has no stable side.  Both rays must share the
/// direction's period.
bool same_limit(const CgrRay& a, const CgrRay& b, const Direction& dir);

}  // namespace bldg
