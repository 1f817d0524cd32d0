#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bldg/axioms.hpp"
#include "bldg/building.hpp"
#include "bldg/coxeter.hpp"
#include "bldg/direction.hpp"

namespace bldg {

/// One limit class of a direction: an equivalence class of chambers whose
/// straight rays toward the direction eventually agree.  `sides` records,
/// for framed classes, which side of each direction wall (walls() order) the
/// class holds, measured in the base frame; it is a label, not a key — in a
/// thick building two distinct classes can share a side vector when their
/// joint apartments carry extra invariant walls of their own.
struct TransversalChamber {
  int id = -1;
  ChamberId representative = -1;  // least member inside ball(radius)
  std::vector<bool> sides;        // empty unless framed
  bool framed = false;            // some member fits in an axis frame chart
  bool stabilized = false;        // already one class at radius - 1
};

/// The limit classes of all chambers in ball(base, radius), computed as
/// connected components of the joined-adjacency relation (panel-adjacent
/// pairs whose panel wall is not a direction wall, read in the first axis
/// frame holding both chambers).  The component scan runs on the larger
/// ball(base, radius + slack) because balls are not convex: a connecting
/// detour can leave the inner ball.  Classes are numbered 0.. in ascending
/// order of their representative.
class TransversalSystem {
 public:
  const Direction& direction() const noexcept { return dir_; }
  int radius() const noexcept { return radius_; }
  int scan_radius() const noexcept { return radius_ + slack_; }

  const std::vector<TransversalChamber>& chambers() const noexcept {
    return chambers_;
  }
  const TransversalChamber& chamber(int id) const { return chambers_.at(id); }
  /// Members of a class inside ball(base, radius), ascending.
  const std::vector<ChamberId>& members(int id) const {
    return members_.at(id);
  }
  /// Class of a chamber; defined on the whole scan ball, but only for
  /// components that meet ball(base, radius).
  std::optional<int> class_of(ChamberId c) const;
  int base_class() const noexcept { return base_class_; }

  /// Class-id pairs (lo < hi) realized by some panel-adjacent chamber pair
  /// of the scan ball whose panel wall is a direction wall.
  const std::vector<std::pair<int, int>>& adjacent_classes() const noexcept {
    return edges_;
  }
  /// Adjacent scan pairs no axis frame could hold; such a pair neither joins
  /// its endpoints nor certifies an edge.
  std::int64_t skipped_pairs() const noexcept { return skipped_pairs_; }

 private:
  friend TransversalSystem transversal_chambers(const Direction& dir,
                                                int radius, int slack);
  TransversalSystem(Direction dir, int radius, int slack)
      : dir_(std::move(dir)), radius_(radius), slack_(slack) {}

  Direction dir_;
  int radius_ = 0;
  int slack_ = 0;
  std::vector<TransversalChamber> chambers_;
  std::vector<std::vector<ChamberId>> members_;
  std::unordered_map<ChamberId, int> class_lookup_;
  std::vector<std::pair<int, int>> edges_;
  std::int64_t skipped_pairs_ = 0;
  int base_class_ = -1;
};

/// Scans ball(base, radius + slack) and groups chambers into limit classes.
/// A class is `stabilized` when its trace on ball(base, radius - 1) was
/// already one nonempty class for the radius - 1 system: growing the radius
/// then only adds members instead of fusing previously separate classes.
TransversalSystem transversal_chambers(const Direction& dir, int radius,
                                       int slack = 2);

/// The canonical generating reflections of the group generated by the
/// direction walls: those walls m for which no other direction wall
/// separates the base chamber from its m-reflection — equivalently, whose
/// inversion set contains no direction wall but m itself.  `matrix` is the
/// Coxeter matrix of pairwise product orders; an order not found within
/// kOrderBound multiplications (or whose power computation exceeds the
/// system's word-length bounds) is recorded as infinite and the pair listed
/// in order_overflow.
struct CanonicalGenerators {
  std::vector<Reflection> generators;   // base-frame reflections, ShortLex
  std::optional<CoxeterMatrix> matrix;  // nullopt when generators is empty
  std::vector<std::pair<int, int>> order_overflow;
  static constexpr int kOrderBound = 12;
};
CanonicalGenerators canonical_generators(const Direction& dir);

/// The graph on limit classes together with the induced Weyl data.  `weyl`
/// is the table of canonical words delta[from][to] over generator indices,
/// normalized in the nested system; an entry is nullopt when no member pair
/// of the two classes fits in one axis frame chart (the count lands in
/// weyl_skipped).  `distance` is the plain edge-path metric (-1 when
/// unreachable inside the truncation).
struct TransversalGraph {
  std::vector<std::pair<int, int>> edges;
  CanonicalGenerators generators;
  std::shared_ptr<const CoxeterSystem> system;  // null when no generators
  std::vector<std::vector<std::optional<Word>>> weyl;
  std::vector<std::vector<int>> distance;
  std::int64_t weyl_skipped = 0;
};
TransversalGraph transversal_graph(const TransversalSystem& classes);

/// The Weyl distance between two classes as a canonical word over the
/// canonical generators: crossings of direction walls along a minimal
/// gallery between members placed in one axis frame chart, multiplied in
/// order and rewritten over the generators by left-descent peeling.
/// Returns nullopt when no member pair of the two classes fits in a frame.
/// Convenience form of the table in transversal_graph.
std::optional<Word> weyl_distance_eta(const TransversalSystem& classes,
                                      int from, int to);

/// Verifies that the limit classes with the induced Weyl distance satisfy
/// the building axioms, mirroring verify_building_axioms: viewpoints and
/// panel owners range over stabilized classes, panel members over all
/// classes.  Undefined Weyl entries and singleton panels are skipped (the
/// truncation can always explain them), never reported as violations.  Also
/// checks the metric glue: graph adjacency matches word length one, the
/// edge-path distance matches the word length, and delta(a, b) is the
/// reversed word of delta(b, a).
AxiomReport check_transversal_building(const TransversalSystem& classes);

/// A truncated combinatorial sector: the chambers of ball(base, radius)
/// reachable inside every late-enough convex hull toward the class.
struct SectorSlice {
  ChamberId apex = -1;
  int class_id = -1;
  int radius = 0;
  std::vector<ChamberId> chambers;  // ascending
  bool stabilized = false;          // the hull union reached a fixed point
};

/// Computes sector slices from convex hulls along a defining ray per class:
/// the ray is a straight periodic ray from a framed member, independent of
/// the apex.  slice(x, id) evaluates the union over k of the intersection
/// over n in [k, k+T] of Conv(x, C_n) against ball(base, radius), where C_n
/// are the ray's period stations, growing k (union steps) and T (tail
/// window) until one more step of either changes nothing; if the growth
/// caps out first, the slice is returned with stabilized = false.  Station
/// distance rows are cached across apexes.
class SectorEngine {
 public:
  /// Radius is taken from the class system (slices and class members must
  /// live on the same ball).  `horizon` bounds the defining-ray search.
  SectorEngine(TransversalSystem classes, int horizon);
  ~SectorEngine();
  SectorEngine(const SectorEngine&) = delete;
  SectorEngine& operator=(const SectorEngine&) = delete;

  SectorSlice slice(ChamberId apex, int class_id);
  const TransversalSystem& classes() const noexcept { return classes_; }
  int radius() const noexcept { return classes_.radius(); }

 private:
  struct ClassRay;
  ClassRay& defining_ray(int class_id);
  const std::vector<int>& station_row(int class_id, int n);

  TransversalSystem classes_;
  int horizon_ = 0;
  std::vector<ChamberId> ball_;
  std::unordered_map<ChamberId, int> ball_index_;
  std::vector<std::optional<ClassRay>> rays_;
  std::unordered_map<ChamberId, std::vector<int>> apex_rows_;
};

/// One-shot convenience wrapper around SectorEngine.
SectorSlice sector(ChamberId apex, int class_id,
                   const TransversalSystem& classes, int horizon);

/// Result of the ray-witness search from one apex: for each class, the
/// chambers of ball(base, radius) lying on some witness ray from the apex
/// whose tail converges to that class; chambers whose witness tail could
/// not be classified land in `indeterminate`.  data_complete turns false
/// when a certified candidate was dropped for data reasons (chart horizon
/// or word-length truncation) rather than ruled out.
struct SectorOracleResult {
  std::vector<std::vector<ChamberId>> slices;  // by class id, ascending ids
  std::vector<ChamberId> indeterminate;
  bool data_complete = true;
};

/// Independent witness-based sector computation.  Candidate periodic tails
/// are enumerated once per system: tail bases p with |p| <= reach, steps
/// q = p^-1 u p certified straight over horizon + 1 powers, and sides
/// constant on every direction wall.  For an apex x, each candidate is
/// planted at the deep end of every axis frame holding x, its stations are
/// materialized, and the candidate witnesses exactly the chambers y with
/// d(x, y) + d(y, base) = d(x, base) — provided the distances to all
/// stations grow additively, which certifies that a minimal gallery from x
/// joined with the tail crosses no wall twice.  Deeper bases on the same
/// tail line subsume shallower ones, so only the deepest placement is
/// evaluated.  The witness class is the class of the tail base chamber.
class SectorOracleEngine {
 public:
  /// reach < 0 selects the default 2 * radius + 2.
  SectorOracleEngine(TransversalSystem classes, int horizon, int reach = -1);
  ~SectorOracleEngine();
  SectorOracleEngine(const SectorOracleEngine&) = delete;
  SectorOracleEngine& operator=(const SectorOracleEngine&) = delete;

  SectorOracleResult all(ChamberId apex);
  const TransversalSystem& classes() const noexcept { return classes_; }
  int radius() const noexcept { return classes_.radius(); }
  int reach() const noexcept { return reach_; }

 private:
  struct Tail;
  std::optional<int> classify(ChamberId tail_base);

  TransversalSystem classes_;
  int horizon_ = 0;
  int reach_ = 0;
  std::vector<ChamberId> ball_;
  std::unordered_map<ChamberId, int> ball_index_;
  std::vector<Tail> tails_;
  std::unordered_map<ChamberId, std::optional<int>> class_memo_;
  std::unordered_map<ChamberId, std::vector<std::uint16_t>> row_memo_;
};

/// One-shot convenience wrapper around SectorOracleEngine.
std::vector<ChamberId> sector_oracle(ChamberId apex, int class_id,
                                     const TransversalSystem& classes,
                                     int horizon, int reach = -1);

/// Verification of the minimal-sector identity at one apex: the slice
/// toward the apex's own class must equal, for every class xi, the slice
/// toward xi intersected with the apex's class members.  `failed` lists the
/// class ids where the identity broke; `skipped` counts classes whose slice
/// did not stabilize.
struct SectorMinResult {
  SectorSlice own;
  int checked = 0;
  std::vector<int> failed;
  int skipped = 0;
};
SectorMinResult sector_min(ChamberId apex, SectorEngine& engine);

}  // namespace bldg
