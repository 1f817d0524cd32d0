#include "bldg/axioms.hpp"

#include <algorithm>
#include <unordered_map>
#include <utility>

#include "bldg/apartment.hpp"

namespace bldg {

namespace {

/// Dense ids for Weyl group elements, with cached lengths and cached right
/// products by generators.  Lookup never allocates; words are stored once.
class ElementTable {
 public:
  explicit ElementTable(const CoxeterSystem& sys)
      : sys_(&sys), rank_(sys.rank()) {
    slots_.assign(kInitialSlots, -1);
    id_of(nullptr, 0);  // the identity gets id 0
  }

  std::int32_t id_of(const Letter* p, std::size_t n) {
    std::size_t i = hash(p, n) & (slots_.size() - 1);
    while (true) {
      const std::int32_t id = slots_[i];
      if (id == -1) break;
      const Word& w = words_[static_cast<std::size_t>(id)];
      if (w.size() == n && std::equal(w.begin(), w.end(), p)) return id;
      i = (i + 1) & (slots_.size() - 1);
    }
    const auto id = static_cast<std::int32_t>(words_.size());
    words_.emplace_back(p, p + n);
    mul_.resize(words_.size() * static_cast<std::size_t>(rank_), -1);
    slots_[i] = id;
    if (words_.size() * 10 > slots_.size() * 7) grow();
    return id;
  }

  std::int32_t id_of_word(const Word& w) { return id_of(w.data(), w.size()); }

  int length(std::int32_t id) const {
    return static_cast<int>(words_[static_cast<std::size_t>(id)].size());
  }

  const Word& word(std::int32_t id) const {
    return words_[static_cast<std::size_t>(id)];
  }

  std::int32_t right_mul(std::int32_t id, int s) {
    std::int32_t v =
        mul_[static_cast<std::size_t>(id) * static_cast<std::size_t>(rank_) +
             static_cast<std::size_t>(s)];
    if (v == -1) {
      Word w = words_[static_cast<std::size_t>(id)];
      w.push_back(static_cast<Letter>(s));
      v = id_of_word(sys_->normal_form(w));
      // recompute the slot: interning may have grown the cache
      mul_[static_cast<std::size_t>(id) * static_cast<std::size_t>(rank_) +
           static_cast<std::size_t>(s)] = v;
    }
    return v;
  }

 private:
  static std::size_t hash(const Letter* p, std::size_t n) {
    std::size_t h = 1469598103934665603ull ^ (n * 1099511628211ull);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
    return h;
  }

  void grow() {
    std::vector<std::int32_t> fresh(slots_.size() * 2, -1);
    for (std::int32_t id : slots_) {
      if (id == -1) continue;
      const Word& w = words_[static_cast<std::size_t>(id)];
      std::size_t i = hash(w.data(), w.size()) & (fresh.size() - 1);
      while (fresh[i] != -1) i = (i + 1) & (fresh.size() - 1);
      fresh[i] = id;
    }
    slots_ = std::move(fresh);
  }

  static constexpr std::size_t kInitialSlots = std::size_t{1} << 12;
  const CoxeterSystem* sys_;
  int rank_;
  std::vector<Word> words_;
  std::vector<std::int32_t> slots_;
  std::vector<std::int32_t> mul_;
};

struct BallScope {
  std::vector<ChamberId> chambers;  // ball(base, radius) in search order
  std::vector<int> depth;           // gallery distance from the base
  std::unordered_map<ChamberId, std::int32_t> pos;
};

BallScope make_ball(Building& b, int radius) {
  BallScope sc;
  sc.chambers = b.ball(b.base(), radius);
  const std::size_t n = sc.chambers.size();
  sc.pos.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i)
    sc.pos.emplace(sc.chambers[i], static_cast<std::int32_t>(i));
  // A minimal gallery from the base stays inside the ball (distances along
  // it grow by one per step), so the induced-subgraph search is exact.
  sc.depth.assign(n, -1);
  sc.depth[0] = 0;
  std::vector<std::int32_t> queue{0};
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const std::int32_t ci = queue[qi];
    for (int s = 0; s < b.rank(); ++s)
      for (ChamberId d : b.panel(sc.chambers[static_cast<std::size_t>(ci)], s)) {
        auto it = sc.pos.find(d);
        if (it == sc.pos.end()) continue;
        if (sc.depth[static_cast<std::size_t>(it->second)] != -1) continue;
        sc.depth[static_cast<std::size_t>(it->second)] =
            sc.depth[static_cast<std::size_t>(ci)] + 1;
        queue.push_back(it->second);
      }
  }
  return sc;
}

struct PanelCell {
  std::int32_t owner;  // position of the owning interior chamber
  std::uint8_t s;
  std::vector<std::int32_t> members;  // positions within the ball listing
};

/// The distinct panels of chambers in ball(base, radius - 1), each owned by
/// its least-position interior member so no panel is checked twice.  Panel
/// members live in ball(base, radius), inside the viewpoint scope.
void collect_cells(Building& b, const BallScope& sc, int radius,
                   std::vector<PanelCell>& cells,
                   std::vector<PanelCell>& singletons) {
  for (std::size_t i = 0; i < sc.chambers.size(); ++i) {
    if (sc.depth[i] > radius - 1) continue;
    for (int s = 0; s < b.rank(); ++s) {
      PanelCell cell{static_cast<std::int32_t>(i), static_cast<std::uint8_t>(s),
                     {}};
      std::int32_t first_interior = -1;
      for (ChamberId m : b.panel(sc.chambers[i], s)) {
        auto it = sc.pos.find(m);
        if (it == sc.pos.end())
          throw Error("panel of an interior chamber leaves the scanned ball");
        cell.members.push_back(it->second);
        if (sc.depth[static_cast<std::size_t>(it->second)] <= radius - 1 &&
            (first_interior == -1 || it->second < first_interior))
          first_interior = it->second;
      }
      if (first_interior != static_cast<std::int32_t>(i)) continue;
      if (cell.members.size() < 2)
        singletons.push_back(std::move(cell));
      else
        cells.push_back(std::move(cell));
    }
  }
}

void add_violation(AxiomReport& rep, const char* axiom, ChamberId source,
                   ChamberId chamber, int s, std::string detail) {
  ++rep.violation_count;
  if (rep.violations.size() < AxiomReport::kMaxRecorded)
    rep.violations.push_back(
        AxiomViolation{axiom, source, chamber, s, std::move(detail)});
}

/// One engine for both panel scans.  In word mode the Weyl distances on
/// each panel must form the unique legal multiset {v, v s, v s, ...} with
/// the length going up; in length mode only the gallery-distance shape is
/// checked (unique gate, everything else one step beyond).
AxiomReport scan_panels(Building& b, int radius, bool check_words) {
  if (radius < 0) throw std::invalid_argument("scan radius must be >= 0");
  AxiomReport rep;
  rep.check = check_words ? "axioms" : "gate";
  const BallScope sc = make_ball(b, radius);
  std::vector<PanelCell> cells, singletons;
  collect_cells(b, sc, radius, cells, singletons);
  const std::size_t n = sc.chambers.size();
  rep.sources = static_cast<std::int64_t>(n);
  ElementTable tab(b.system());
  if (check_words) {
    rep.cells += static_cast<std::int64_t>(singletons.size());
    for (const PanelCell& cell : singletons)
      add_violation(rep, "WD3", -1, sc.chambers[static_cast<std::size_t>(cell.owner)],
                    cell.s,
                    "panel holds a single chamber, so no neighbor realizes "
                    "the other Weyl distances");
  }
  Word flat;
  std::vector<std::size_t> offs;
  std::vector<std::int32_t> row(n);
  std::vector<std::int32_t> len(n);
  for (std::size_t yi = 0; yi < n; ++yi) {
    const ChamberId y = sc.chambers[yi];
    try {
      b.delta_row(y, sc.chambers, flat, offs);
    } catch (const TruncationError&) {
      ++rep.skipped;
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t a = offs[i];
      const std::size_t e = offs[i + 1];
      len[i] = static_cast<std::int32_t>(e - a);
      if (check_words) row[i] = tab.id_of(flat.data() + a, e - a);
    }
    if (check_words) {
      if (len[yi] != 0)
        add_violation(rep, "WD1", y, y, -1,
                      "the Weyl distance from a chamber to itself is not e");
      for (std::size_t i = 0; i < n; ++i)
        if (len[i] == 0 && i != yi)
          add_violation(rep, "WD1", y, sc.chambers[i], -1,
                        "distinct chambers at Weyl distance e");
    }
    for (const PanelCell& cell : cells) {
      ++rep.cells;
      const auto& mem = cell.members;
      std::int32_t lmin = len[static_cast<std::size_t>(mem[0])];
      std::int32_t vmin =
          check_words ? row[static_cast<std::size_t>(mem[0])] : 0;
      int min_count = 1;
      bool min_mixed = false;
      for (std::size_t j = 1; j < mem.size(); ++j) {
        const std::int32_t l = len[static_cast<std::size_t>(mem[j])];
        if (l < lmin) {
          lmin = l;
          if (check_words) vmin = row[static_cast<std::size_t>(mem[j])];
          min_count = 1;
          min_mixed = false;
        } else if (l == lmin) {
          ++min_count;
          if (check_words)
            min_mixed |= (row[static_cast<std::size_t>(mem[j])] != vmin);
        }
      }
      const ChamberId cc = sc.chambers[static_cast<std::size_t>(cell.owner)];
      if (!check_words) {
        if (min_count != 1) {
          add_violation(rep, "gate", y, cc, cell.s,
                        "no unique nearest chamber in the panel");
          continue;
        }
        for (std::size_t j = 0; j < mem.size(); ++j)
          if (len[static_cast<std::size_t>(mem[j])] != lmin &&
              len[static_cast<std::size_t>(mem[j])] != lmin + 1) {
            add_violation(rep, "gate", y, cc, cell.s,
                          "panel chamber more than one step beyond the gate");
            break;
          }
        continue;
      }
      if (min_mixed) {
        add_violation(
            rep, "WD2", y, cc, cell.s,
            "two equally near panel chambers sit at different Weyl distances");
        continue;
      }
      const std::int32_t vs = tab.right_mul(vmin, cell.s);
      bool outside = false;
      std::size_t at_vs = 0;
      for (std::size_t j = 0; j < mem.size() && !outside; ++j) {
        const std::int32_t u = row[static_cast<std::size_t>(mem[j])];
        if (u == vmin) continue;
        if (u == vs)
          ++at_vs;
        else
          outside = true;
      }
      if (outside) {
        add_violation(rep, "WD2", y, cc, cell.s,
                      "panel chamber outside {w, ws} from this viewpoint");
        continue;
      }
      if (tab.length(vs) < lmin) {
        add_violation(rep, "WD3", y, cc, cell.s,
                      "no panel chamber realizes the descending Weyl distance");
        continue;
      }
      if (min_count > 1) {
        if (at_vs > 0)
          add_violation(rep, "WD2", y, cc, cell.s,
                        "ascent is forced but a second chamber stays at the "
                        "gate distance");
        else
          add_violation(
              rep, "WD3", y, cc, cell.s,
              "no panel chamber realizes the ascending Weyl distance");
      }
    }
  }
  return rep;
}

}  // namespace

std::string AxiomReport::summary() const {
  std::string out = check + ": " + std::to_string(sources) + " sources, " +
                    std::to_string(cells) + " cells";
  if (pairs > 0) out += ", " + std::to_string(pairs) + " pairs";
  if (skipped > 0) out += ", " + std::to_string(skipped) + " skipped";
  out += ", " + std::to_string(violation_count) + " violations";
  return out;
}

AxiomReport verify_building_axioms(Building& b, int radius) {
  return scan_panels(b, radius, true);
}

AxiomReport check_gate_property(Building& b, int radius) {
  return scan_panels(b, radius, false);
}

AxiomReport check_retraction(const std::shared_ptr<Building>& bp, int radius) {
  if (!bp) throw std::invalid_argument("check_retraction needs a building");
  if (radius < 0) throw std::invalid_argument("scan radius must be >= 0");
  Building& b = *bp;
  AxiomReport rep;
  rep.check = "retraction";
  const ChamberId base = b.base();
  const BallScope sc = make_ball(b, radius);
  const std::size_t n = sc.chambers.size();
  rep.sources = static_cast<std::int64_t>(n);
  const CoxeterSystem& sys = b.system();

  // Coordinates u_c = delta(base, c): the retraction maps c to the
  // apartment chamber at u_c.
  Word flat;
  std::vector<std::size_t> offs;
  b.delta_row(base, sc.chambers, flat, offs);
  std::vector<Word> coords(n);
  for (std::size_t i = 0; i < n; ++i)
    coords[i].assign(flat.begin() + static_cast<std::ptrdiff_t>(offs[i]),
                     flat.begin() + static_cast<std::ptrdiff_t>(offs[i + 1]));

  // Distances from the base are preserved by construction exactly when the
  // coordinate length matches the gallery distance.
  for (std::size_t i = 0; i < n; ++i)
    if (static_cast<int>(coords[i].size()) != sc.depth[i])
      add_violation(rep, "retraction", base, sc.chambers[i], -1,
                    "Weyl coordinate length differs from the gallery "
                    "distance to the base");

  // Contraction: the retraction must not increase any distance, that is
  // l(u_c^-1 u_d) <= d(c, d) over all pairs in the ball.
  Word rev, cat;
  std::vector<ChamberId> suffix;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    suffix.assign(sc.chambers.begin() + static_cast<std::ptrdiff_t>(i + 1),
                  sc.chambers.end());
    try {
      b.delta_row(sc.chambers[i], suffix, flat, offs);
    } catch (const TruncationError&) {
      rep.skipped += static_cast<std::int64_t>(suffix.size());
      continue;
    }
    rev.assign(coords[i].rbegin(), coords[i].rend());
    for (std::size_t j = 0; j < suffix.size(); ++j) {
      ++rep.pairs;
      const int dcd = static_cast<int>(offs[j + 1] - offs[j]);
      cat = rev;
      cat.insert(cat.end(), coords[i + 1 + j].begin(),
                 coords[i + 1 + j].end());
      if (sys.word_length(cat) > dcd)
        add_violation(rep, "retraction", sc.chambers[i], suffix[j], -1,
                      "retraction increased the distance between two "
                      "chambers");
    }
  }

  // Materialize the apartment as a chart on an inner ball and re-check the
  // image chamber-level: the chart must cover every coordinate and keep
  // distances from the base.
  constexpr std::size_t kChartCap = 3000;
  int inner = radius;
  auto within = [&](int r) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (sc.depth[i] <= r) ++count;
    return count;
  };
  while (inner > 0 && within(inner) > kChartCap) --inner;
  if (within(inner) <= kChartCap) {
    ApartmentChart chart(bp, base);
    for (std::size_t i = 0; i < n; ++i) {
      if (sc.depth[i] > inner) continue;
      ++rep.cells;
      try {
        const ChamberId img = chart.chamber_at(coords[i]);
        if (b.distance(base, img) != static_cast<int>(coords[i].size()))
          add_violation(rep, "retraction", base, sc.chambers[i], -1,
                        "chart image sits at the wrong distance from the "
                        "base");
      } catch (const HorizonError&) {
        add_violation(rep, "retraction", base, sc.chambers[i], -1,
                      "no apartment chart reaches the coordinate of this "
                      "chamber");
      } catch (const TruncationError&) {
        ++rep.skipped;
      }
    }
  }
  return rep;
}

}  // namespace bldg
