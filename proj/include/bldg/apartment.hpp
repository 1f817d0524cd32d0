#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "bldg/building.hpp"

namespace bldg {

/// A partial Weyl-isometric embedding of the Coxeter complex into a
/// building: normal-form coordinates w map to chambers so that
/// delta(chart(v), chart(w)) = v^-1 w for every mapped pair.  A chart starts
/// from a center chamber at coordinate e and grows on demand; a fully grown
/// chart is an apartment.
///
/// Growth mutates the chart, so queries that must not disturb a shared
/// chart copy it first (charts are cheap value types over id maps).
class ApartmentChart {
 public:
  ApartmentChart(std::shared_ptr<Building> building, ChamberId center);

  Building& building() const noexcept { return *building_; }
  const std::shared_ptr<Building>& building_ptr() const noexcept {
    return building_;
  }
  ChamberId center() const;
  std::size_t size() const noexcept { return fwd_.size(); }

  bool has_coord(const Word& nf) const { return fwd_.contains(nf); }
  bool has_chamber(ChamberId c) const { return rev_.contains(c); }

  /// The chamber at an already-mapped coordinate (throws Error if absent).
  ChamberId at(const Word& nf) const;
  std::optional<Word> coord_of(ChamberId c) const;

  /// All placed (coordinate, chamber) pairs in shortlex coordinate order.
  std::vector<std::pair<Word, ChamberId>> entries() const;

  /// The chamber at the given coordinate, growing the chart along normal-
  /// form prefixes when needed.  Free choices walk panel members in
  /// ascending chamber id with full backtracking; every placement is
  /// checked for Weyl-isometry against the whole chart.  Throws
  /// HorizonError when no consistent growth exists.
  ChamberId chamber_at(const Word& coord);

  /// Places a chamber at a coordinate after checking Weyl-isometry against
  /// every current entry; throws HorizonError on any conflict.
  void place(ChamberId chamber, const Word& coord);

 private:
  bool consistent(ChamberId chamber, const Word& nf) const;
  void insert(const Word& nf, ChamberId chamber);

  std::shared_ptr<Building> building_;
  std::unordered_map<Word, ChamberId, WordHash> fwd_;
  std::unordered_map<ChamberId, Word> rev_;
};

/// Grows the chart to cover the given chambers.  A target's coordinate is
/// forced to delta(center, target); any conflict means no apartment
/// compatible with the current chart contains the targets, reported as
/// HorizonError ("no apartment found within horizon"), never as
/// nonexistence of an apartment in the building.
ApartmentChart& extend_apartment(ApartmentChart& chart,
                                 const std::vector<ChamberId>& targets);

/// The retraction onto the chart's apartment centered at `center` (which
/// must be a chart chamber): d maps to the chart chamber at coordinate
/// coord(center) * delta(center, d).  Fills the chart as needed and throws
/// HorizonError("chart coverage insufficient ...") when it cannot.
ChamberId retraction(ApartmentChart& chart, ChamberId center, ChamberId d);

}  // namespace bldg
