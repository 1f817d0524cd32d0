#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "bldg/coxeter.hpp"

namespace bldg {

/// Chambers are handles into a building's internal chamber store.  Id 0 is
/// always the base chamber.  Algebraic backends materialize chambers lazily,
/// so ids depend on the query history of the object; they are stable within
/// a run but carry no meaning across runs.  File-backed buildings number
/// their chambers up front, in breadth-first order from the base.
using ChamberId = std::int64_t;

/// A chamber system of type (W, S) presented through panels and Weyl
/// distance.  All panels are finite (locally finite buildings only).
class Building {
 public:
  explicit Building(std::shared_ptr<const CoxeterSystem> system);
  virtual ~Building();
  Building(const Building&) = delete;
  Building& operator=(const Building&) = delete;

  const CoxeterSystem& system() const noexcept { return *system_; }
  std::shared_ptr<const CoxeterSystem> system_ptr() const noexcept {
    return system_;
  }
  int rank() const noexcept { return system_->rank(); }
  ChamberId base() const noexcept { return 0; }

  /// Radius around the base out to which the chamber set is complete, or
  /// nullopt when the backend can materialize chambers at any distance.
  virtual std::optional<int> declared_radius() const = 0;

  /// All chambers of the s-panel through c, including c itself, in a
  /// deterministic order.  Panels have at least one element (c).
  virtual std::vector<ChamberId> panel(ChamberId c, int s) = 0;

  /// Weyl distance from c to d.
  virtual GroupElement delta(ChamberId c, ChamberId d) = 0;

  /// Weyl distance as a plain normal-form word; backends override this when
  /// they can skip the GroupElement plumbing on hot paths.
  virtual Word delta_word(ChamberId c, ChamberId d) {
    return delta(c, d).word();
  }

  /// Gallery distance (the length of the Weyl distance); overridable with a
  /// cheaper reduction that skips canonical reordering.
  virtual int distance(ChamberId c, ChamberId d) {
    return static_cast<int>(delta_word(c, d).size());
  }

  /// Weyl distance words from one source to many targets, appended to
  /// `flat` with `offsets` marking word boundaries (offsets.size() ends up
  /// as to.size() + 1).  Entry-wise semantics match delta_word, including
  /// thrown errors; backends override this to amortize per-source work.
  virtual void delta_row(ChamberId from, const std::vector<ChamberId>& to,
                         Word& flat, std::vector<std::size_t>& offsets);

  /// Chambers within gallery distance `radius` of `center`, breadth-first:
  /// distance ascending, deterministic discovery order within a level.
  /// File-backed buildings throw TruncationError when the ball could be
  /// clipped by the declared radius.
  std::vector<ChamberId> ball(ChamberId center, int radius);

  /// Number of chambers currently materialized.
  virtual std::size_t materialized() const = 0;

  /// Human-readable chamber name for reports and errors.
  virtual std::string chamber_label(ChamberId c) const = 0;

 protected:
  /// Hook for backends that cannot guarantee a complete ball.
  virtual void check_ball_complete(ChamberId center, int radius);

 private:
  std::shared_ptr<const CoxeterSystem> system_;
};

/// The thin building: chambers are the elements of W itself, the s-panel of
/// w is {w, ws}, and the Weyl distance is delta(v, w) = v^-1 w.
class ThinBuilding final : public Building {
 public:
  explicit ThinBuilding(std::shared_ptr<const CoxeterSystem> system);

  std::optional<int> declared_radius() const override { return std::nullopt; }
  std::vector<ChamberId> panel(ChamberId c, int s) override;
  GroupElement delta(ChamberId c, ChamberId d) override;
  Word delta_word(ChamberId c, ChamberId d) override;
  int distance(ChamberId c, ChamberId d) override;
  std::size_t materialized() const override;
  std::string chamber_label(ChamberId c) const override;

  /// The W element a chamber stands for, and the chamber a W element names.
  GroupElement chamber_element(ChamberId c) const;
  ChamberId chamber_of(const GroupElement& g);

 private:
  Word word_of(ChamberId c) const;
  ChamberId intern(const Word& nf);
  mutable std::mutex mu_;
  std::vector<Word> elements_;
  std::unordered_map<Word, ChamberId, WordHash> index_;
};

/// A building realized as a graph product of finite cyclic groups: one
/// factor Z/q_v per generator v of a right-angled system, with factors
/// commuting exactly when their generators do.  Chambers are the group
/// elements in syllable normal form; the s-panel of g is the coset g<s>,
/// which has exactly q_s chambers; the Weyl distance reads off the vertex
/// word of the reduced syllable form of g^-1 h (such vertex words are
/// reduced in W).  With every q_v = 2 this is the thin building again; with
/// q_v >= 3 it is a thick building of the same type.
class GraphProductBuilding final : public Building {
 public:
  /// `orders[v]` = q_v >= 2.  The system must use the right-angled backend.
  GraphProductBuilding(std::shared_ptr<const CoxeterSystem> system,
                       std::vector<int> orders);

  std::optional<int> declared_radius() const override { return std::nullopt; }
  std::vector<ChamberId> panel(ChamberId c, int s) override;
  GroupElement delta(ChamberId c, ChamberId d) override;
  Word delta_word(ChamberId c, ChamberId d) override;
  int distance(ChamberId c, ChamberId d) override;
  void delta_row(ChamberId from, const std::vector<ChamberId>& to, Word& flat,
                 std::vector<std::size_t>& offsets) override;
  std::size_t materialized() const override;
  std::string chamber_label(ChamberId c) const override;

  int order_of(int v) const;

 private:
  struct Syllable {
    Letter v;
    std::uint16_t e;  // 1 .. q_v - 1
    bool operator==(const Syllable&) const = default;
  };
  using SylWord = std::vector<Syllable>;
  struct SylHash {
    std::size_t operator()(const SylWord& w) const noexcept;
  };

  SylWord reduce(SylWord w) const;
  SylWord normalize(SylWord w) const;
  SylWord mul(const SylWord& a, const SylWord& b) const;
  SylWord inv(const SylWord& a) const;
  SylWord word_of(ChamberId c) const;
  ChamberId intern(const SylWord& nf);
  void append_reduced(SylWord& w, Syllable s, SylWord& pending) const;

  std::vector<int> orders_;
  std::vector<std::uint64_t> noncommute_;  // bit masks, filled when rank <= 64
  mutable std::mutex mu_;
  std::vector<SylWord> elements_;
  std::unordered_map<SylWord, ChamberId, SylHash> index_;
};

/// A building given extensionally: a chamber count and, per generator, a
/// partition of the chambers into panels.  The Weyl distance is computed by
/// breadth-first search and is certified exact only while the minimal
/// galleries provably stay inside the declared radius; beyond that the
/// query throws TruncationError.
class LoadedBuilding final : public Building {
 public:
  /// `panels[s]` lists the s-panels as chamber id groups.  Chambers absent
  /// from every s-group sit in singleton s-panels.  A chamber listed twice
  /// for one generator is rejected (SpecError).
  LoadedBuilding(std::shared_ptr<const CoxeterSystem> system,
                 std::int64_t chamber_count, int declared_radius,
                 const std::vector<std::vector<std::vector<ChamberId>>>& panels);

  std::optional<int> declared_radius() const override { return radius_; }
  std::vector<ChamberId> panel(ChamberId c, int s) override;
  GroupElement delta(ChamberId c, ChamberId d) override;
  Word delta_word(ChamberId c, ChamberId d) override;
  void delta_row(ChamberId from, const std::vector<ChamberId>& to, Word& flat,
                 std::vector<std::size_t>& offsets) override;
  std::size_t materialized() const override {
    return static_cast<std::size_t>(count_);
  }
  std::string chamber_label(ChamberId c) const override;

  /// Distance from the base recorded at load time.
  int base_depth(ChamberId c) const;

 protected:
  void check_ball_complete(ChamberId center, int radius) override;

 private:
  void check_chamber(ChamberId c) const;

  std::int64_t count_;
  int radius_;
  // panel_members_[s][k] = the k-th s-panel; panel_of_[s][c] = k.
  std::vector<std::vector<std::vector<ChamberId>>> panel_members_;
  std::vector<std::vector<std::int32_t>> panel_of_;
  std::vector<int> base_depth_;  // gallery distance from the base
};

/// The thin building of the given type.
std::shared_ptr<ThinBuilding> build_thin(const CoxeterMatrix& m);

/// A thick right-angled building with panel sizes `orders`.
std::shared_ptr<GraphProductBuilding> build_graph_product(
    const CoxeterMatrix& m, std::vector<int> orders);

/// The (q0, q1)-biregular tree as a building of infinite dihedral type:
/// the graph product on two non-commuting generators.
std::shared_ptr<GraphProductBuilding> build_tree(int q0, int q1);

/// A gallery: consecutive chambers are distinct members of a common panel,
/// and `type[i]` names that panel's generator.
struct Gallery {
  std::vector<ChamberId> chambers;  // chambers.size() == type.size() + 1
  Word type;
};

/// The unique chamber of panel(c, s) at minimal distance from d (the gate).
/// Throws Error when the minimum is not unique, which no building allows.
ChamberId proj_panel(Building& b, ChamberId c, int s, ChamberId d);

/// All minimal galleries from c to d in lexicographic type order, or the
/// first `limit` of them.  Every returned type word is reduced.
std::vector<Gallery> minimal_galleries(
    Building& b, ChamberId c, ChamberId d,
    std::size_t limit = std::numeric_limits<std::size_t>::max());

/// Chambers on at least one minimal gallery from c to d, i.e. the chambers
/// z with d(c,z) + d(z,d) = d(c,d), in breadth-first order from c.
std::vector<ChamberId> conv_chambers(Building& b, ChamberId c, ChamberId d);

}  // namespace bldg
