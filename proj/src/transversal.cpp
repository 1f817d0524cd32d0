#include "bldg/transversal.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "bldg/apartment.hpp"

namespace bldg {

namespace {

struct UnionFind {
  std::vector<int> parent;
  std::vector<int> size;

  explicit UnionFind(std::size_t n) : parent(n), size(n, 1) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
  }
};

/// Lazily built axis frame charts, one per recentering, copied per query.
class FrameProtos {
 public:
  explicit FrameProtos(const Direction& dir)
      : dir_(dir), slots_(static_cast<std::size_t>(dir.window()) + 1) {}

  const ApartmentChart& get(int n0) {
    auto& slot = slots_[static_cast<std::size_t>(n0)];
    if (!slot) slot.emplace(axis_frame_chart(dir_, n0));
    return *slot;
  }

 private:
  const Direction& dir_;
  std::vector<std::optional<ApartmentChart>> slots_;
};

using WordSet = std::unordered_set<Word, WordHash>;

/// Direction-wall words pulled into each frame (u^-n0 t u^n0).  Testing a
/// frame-coordinate reflection against this set avoids pushing long
/// reflections back to the base frame, which can overrun the word-length
/// bounds of a table-backed system.
class FrameWallWords {
 public:
  explicit FrameWallWords(const Direction& dir)
      : dir_(dir), slots_(static_cast<std::size_t>(dir.window()) + 1) {}

  const WordSet& get(int n0) {
    auto& slot = slots_[static_cast<std::size_t>(n0)];
    if (!slot) {
      slot.emplace();
      for (const DirectionWall& dw : dir_.walls())
        slot->insert(wall_in_frame(dir_, dw.wall, n0).element.word());
    }
    return *slot;
  }

 private:
  const Direction& dir_;
  std::vector<std::optional<WordSet>> slots_;
};

/// The product, in reverse gallery order, of the direction-wall crossings
/// along the ShortLex geodesic from the frame center to coordinate v,
/// pushed to the base frame by one final conjugation.  Crossing a wall t
/// carries a class C to the reflected class t.C, so after crossings
/// t_1, .., t_m the walk sits in (t_m ... t_1).E — the same reverse
/// telescoping that rebuilds a group element from the prefix conjugates of
/// its reduced word.  The result is the coordinate of v's class relative to
/// the axis class (the frame center always sits in the axis class: no
/// direction wall separates axis chambers from the base).
GroupElement stripe_coordinate(const Direction& dir, const WordSet& pulled,
                               const Word& v, int n0) {
  const CoxeterSystem& sys = dir.system();
  GroupElement prefix = sys.identity();
  GroupElement acc = sys.identity();
  for (Letter s : v) {
    const Reflection r = sys.reflection(prefix, static_cast<int>(s));
    if (pulled.contains(r.element.word())) acc = sys.multiply(r.element, acc);
    prefix = sys.right_mul(prefix, static_cast<int>(s));
  }
  if (n0 == 0) return acc;
  const GroupElement& shift = dir.period_power(n0);
  return sys.multiply(sys.multiply(shift, acc), sys.inverse(shift));
}

struct NestedData {
  CanonicalGenerators gens;
  std::shared_ptr<const CoxeterSystem> nested;  // null iff gens empty
};

NestedData make_nested(const Direction& dir) {
  NestedData nd{canonical_generators(dir), nullptr};
  if (nd.gens.matrix)
    nd.nested = std::make_shared<CoxeterSystem>(*nd.gens.matrix);
  return nd;
}

/// Rewrites an element of the group generated by the canonical generators
/// as a word over them, by stripping left descents: some generator must
/// shorten any nonidentity element of a reflection subgroup, and each strip
/// shortens, so the loop terminates with a reduced word.
Word peel_over_generators(const CoxeterSystem& sys,
                          const std::vector<Reflection>& gens,
                          GroupElement g) {
  Word letters;
  while (!g.is_identity()) {
    bool found = false;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      const GroupElement next = sys.multiply(gens[i].element, g);
      if (next.length() < g.length()) {
        letters.push_back(static_cast<Letter>(i));
        g = next;
        found = true;
        break;
      }
    }
    if (!found)
      throw SpecError(
          "crossing product " + g.str() +
          " has no descent over the canonical generators; the class scan "
          "is inconsistent with the wall set");
  }
  return letters;
}

/// Weyl word between two classes through one frame-placed member pair, or
/// nullopt when no tried pair fits in an axis frame.
std::optional<Word> weyl_pair(const TransversalSystem& classes,
                              const NestedData& nd, FrameProtos& protos,
                              FrameWallWords& pulled, int from, int to) {
  constexpr int kPairCap = 96;
  if (from == to) return Word{};
  const Direction& dir = classes.direction();
  const CoxeterSystem& sys = dir.system();
  const std::vector<ChamberId>& ma = classes.members(from);
  const std::vector<ChamberId>& mb = classes.members(to);

  std::vector<std::pair<ChamberId, ChamberId>> tries;
  tries.reserve(ma.size() + mb.size() + ma.size() * mb.size());
  for (ChamberId b : mb) tries.emplace_back(ma.front(), b);
  for (ChamberId a : ma) tries.emplace_back(a, mb.front());
  for (ChamberId a : ma)
    for (ChamberId b : mb) tries.emplace_back(a, b);

  int attempts = 0;
  std::set<std::pair<ChamberId, ChamberId>> seen;
  for (const auto& [a, b] : tries) {
    if (!seen.insert({a, b}).second) continue;
    if (++attempts > kPairCap) break;
    for (int n0 = 0; n0 <= dir.window(); ++n0) {
      ApartmentChart chart = protos.get(n0);
      try {
        extend_apartment(chart, {a, b});
      } catch (const HorizonError&) {
        continue;
      }
      const GroupElement pa =
          stripe_coordinate(dir, pulled.get(n0), *chart.coord_of(a), n0);
      const GroupElement pb =
          stripe_coordinate(dir, pulled.get(n0), *chart.coord_of(b), n0);
      const Word letters = peel_over_generators(
          sys, nd.gens.generators, sys.multiply(sys.inverse(pa), pb));
      if (!nd.nested) return letters;  // only the empty word can land here
      return nd.nested->normal_form(letters);
    }
  }
  return std::nullopt;
}

std::vector<ChamberId> bits_to_chambers(const std::vector<std::uint64_t>& bits,
                                        const std::vector<ChamberId>& ball) {
  std::vector<ChamberId> out;
  for (std::size_t i = 0; i < ball.size(); ++i)
    if (bits[i >> 6] & (std::uint64_t{1} << (i & 63))) out.push_back(ball[i]);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::optional<int> TransversalSystem::class_of(ChamberId c) const {
  const auto it = class_lookup_.find(c);
  if (it == class_lookup_.end()) return std::nullopt;
  return it->second;
}

TransversalSystem transversal_chambers(const Direction& dir, int radius,
                                       int slack) {
  if (radius < 0) throw std::invalid_argument("radius must be non-negative");
  if (slack < 0) throw std::invalid_argument("slack must be non-negative");
  Building& bld = dir.building();
  const CoxeterSystem& sys = dir.system();
  TransversalSystem out(dir, radius, slack);

  const std::vector<ChamberId> scan = bld.ball(dir.base(), radius + slack);
  const int nscan = static_cast<int>(scan.size());
  std::unordered_map<ChamberId, int> index;
  index.reserve(scan.size());
  for (int i = 0; i < nscan; ++i) index.emplace(scan[i], i);

  // One panel sweep yields both the pair list and the adjacency used for
  // exact depths (balls are star-shaped around their center, so an induced
  // breadth-first search reproduces gallery distance from the base).
  struct PairEdge {
    int a, b, s;
  };
  std::vector<PairEdge> pairs;
  std::vector<std::vector<int>> adj(scan.size());
  for (int i = 0; i < nscan; ++i)
    for (int s = 0; s < bld.rank(); ++s)
      for (ChamberId m : bld.panel(scan[i], s)) {
        if (m == scan[i]) continue;
        const auto it = index.find(m);
        if (it == index.end()) continue;
        adj[static_cast<std::size_t>(i)].push_back(it->second);
        if (it->second > i) pairs.push_back({i, it->second, s});
      }

  std::vector<int> depth(scan.size(), -1);
  {
    std::vector<int> frontier{index.at(dir.base())};
    depth[static_cast<std::size_t>(frontier.front())] = 0;
    while (!frontier.empty()) {
      std::vector<int> next;
      for (int i : frontier)
        for (int j : adj[static_cast<std::size_t>(i)])
          if (depth[static_cast<std::size_t>(j)] < 0) {
            depth[static_cast<std::size_t>(j)] =
                depth[static_cast<std::size_t>(i)] + 1;
            next.push_back(j);
          }
      frontier = std::move(next);
    }
  }

  FrameProtos protos(dir);
  FrameWallWords pulled(dir);
  const bool no_walls = dir.walls().empty();

  // Verdict per adjacent pair: joined (no direction wall between), cut
  // (their panel wall is a direction wall), or unknown (no axis frame holds
  // both).  Distinct chambers of one panel are separated exactly by that
  // panel's wall, read off in the first frame holding both.
  UnionFind uf(scan.size());
  UnionFind uf_prev(scan.size());
  const int prev_depth = radius - 1 + slack;
  std::vector<std::pair<int, int>> cut;
  for (const PairEdge& e : pairs) {
    std::optional<bool> joined;
    if (no_walls) {
      joined = true;
    } else {
      for (int n0 = 0; n0 <= dir.window() && !joined; ++n0) {
        ApartmentChart chart = protos.get(n0);
        try {
          extend_apartment(chart, {scan[static_cast<std::size_t>(e.a)],
                                   scan[static_cast<std::size_t>(e.b)]});
        } catch (const HorizonError&) {
          continue;
        }
        const GroupElement va =
            sys.element(*chart.coord_of(scan[static_cast<std::size_t>(e.a)]));
        const Reflection t = sys.reflection(va, e.s);
        joined = !pulled.get(n0).contains(t.element.word());
      }
    }
    if (!joined) {
      ++out.skipped_pairs_;
      continue;
    }
    if (*joined) {
      uf.unite(e.a, e.b);
      if (radius >= 1 && depth[static_cast<std::size_t>(e.a)] <= prev_depth &&
          depth[static_cast<std::size_t>(e.b)] <= prev_depth)
        uf_prev.unite(e.a, e.b);
    } else {
      cut.emplace_back(e.a, e.b);
    }
  }

  // Classes: components with a member inside ball(radius), numbered by
  // ascending representative.
  std::unordered_map<int, std::vector<int>> root_members;  // inner indices
  for (int i = 0; i < nscan; ++i)
    if (depth[static_cast<std::size_t>(i)] <= radius)
      root_members[uf.find(i)].push_back(i);
  std::vector<std::pair<ChamberId, int>> order;  // (least member, root)
  order.reserve(root_members.size());
  for (auto& [root, mem] : root_members) {
    ChamberId least = scan[static_cast<std::size_t>(mem.front())];
    for (int i : mem)
      least = std::min(least, scan[static_cast<std::size_t>(i)]);
    order.emplace_back(least, root);
  }
  std::sort(order.begin(), order.end());

  std::unordered_map<int, int> root_id;
  for (int id = 0; id < static_cast<int>(order.size()); ++id)
    root_id.emplace(order[static_cast<std::size_t>(id)].second, id);

  out.chambers_.resize(order.size());
  out.members_.resize(order.size());
  for (int id = 0; id < static_cast<int>(order.size()); ++id) {
    const auto& [least, root] = order[static_cast<std::size_t>(id)];
    TransversalChamber& ch = out.chambers_[static_cast<std::size_t>(id)];
    ch.id = id;
    ch.representative = least;

    const std::vector<int>& mem = root_members.at(root);
    std::vector<ChamberId>& members = out.members_[static_cast<std::size_t>(id)];
    members.reserve(mem.size());
    for (int i : mem) members.push_back(scan[static_cast<std::size_t>(i)]);
    std::sort(members.begin(), members.end());

    // Stabilized: the members already visible at radius - 1 formed one
    // nonempty class of the radius - 1 system, whose verdicts this scan
    // reproduces on the shrunken ball.
    if (radius >= 1) {
      int prev_root = -1;
      bool one_component = true;
      bool nonempty = false;
      for (int i : mem) {
        if (depth[static_cast<std::size_t>(i)] > radius - 1) continue;
        nonempty = true;
        const int r = uf_prev.find(i);
        if (prev_root < 0) prev_root = r;
        else if (prev_root != r) one_component = false;
      }
      ch.stabilized = nonempty && one_component;
    }

    for (ChamberId m : members) {
      if (const auto sides = wall_sides(m, dir)) {
        ch.sides = *sides;
        ch.framed = true;
        break;
      }
    }
  }

  for (int i = 0; i < nscan; ++i) {
    const auto it = root_id.find(uf.find(i));
    if (it != root_id.end())
      out.class_lookup_.emplace(scan[static_cast<std::size_t>(i)], it->second);
  }

  std::set<std::pair<int, int>> edges;
  for (const auto& [a, b] : cut) {
    const auto ia = root_id.find(uf.find(a));
    const auto ib = root_id.find(uf.find(b));
    if (ia == root_id.end() || ib == root_id.end()) continue;
    if (ia->second == ib->second)
      throw SpecError(
          "adjacent chambers separated by a direction wall were merged into "
          "one class; the joined relation contradicts the wall set");
    edges.insert({std::min(ia->second, ib->second),
                  std::max(ia->second, ib->second)});
  }
  out.edges_.assign(edges.begin(), edges.end());

  const auto base_it = out.class_lookup_.find(dir.base());
  if (base_it == out.class_lookup_.end())
    throw Error("base chamber missing from its own class scan");
  out.base_class_ = base_it->second;
  return out;
}

CanonicalGenerators canonical_generators(const Direction& dir) {
  const CoxeterSystem& sys = dir.system();
  CanonicalGenerators out;
  for (const DirectionWall& dw : dir.walls()) {
    bool fundamental = true;
    for (const Reflection& r : sys.inversion_set(dw.wall.element)) {
      if (r == dw.wall) continue;
      if (dir.is_direction_wall(r.element.word())) {
        fundamental = false;
        break;
      }
    }
    if (fundamental) out.generators.push_back(dw.wall);
  }
  const int n = static_cast<int>(out.generators.size());
  if (n == 0) return out;

  std::vector<int> entries(static_cast<std::size_t>(n) *
                               static_cast<std::size_t>(n),
                           1);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const GroupElement g =
          sys.multiply(out.generators[static_cast<std::size_t>(i)].element,
                       out.generators[static_cast<std::size_t>(j)].element);
      int order = 0;
      try {
        GroupElement cur = sys.identity();
        for (int k = 1; k <= CanonicalGenerators::kOrderBound; ++k) {
          cur = sys.multiply(cur, g);
          if (cur.is_identity()) {
            order = k;
            break;
          }
        }
      } catch (const TruncationError&) {
        order = 0;
      }
      if (order == 0) out.order_overflow.emplace_back(i, j);
      entries[static_cast<std::size_t>(i * n + j)] = order;
      entries[static_cast<std::size_t>(j * n + i)] = order;
    }
  out.matrix.emplace(n, std::move(entries));
  return out;
}

std::optional<Word> weyl_distance_eta(const TransversalSystem& classes,
                                      int from, int to) {
  classes.chamber(from);
  classes.chamber(to);
  const NestedData nd = make_nested(classes.direction());
  FrameProtos protos(classes.direction());
  FrameWallWords pulled(classes.direction());
  return weyl_pair(classes, nd, protos, pulled, from, to);
}

TransversalGraph transversal_graph(const TransversalSystem& classes) {
  TransversalGraph g;
  g.edges = classes.adjacent_classes();
  NestedData nd = make_nested(classes.direction());
  g.generators = nd.gens;
  g.system = nd.nested;

  const int n = static_cast<int>(classes.chambers().size());
  g.weyl.assign(static_cast<std::size_t>(n),
                std::vector<std::optional<Word>>(static_cast<std::size_t>(n)));
  FrameProtos protos(classes.direction());
  FrameWallWords pulled(classes.direction());
  for (int i = 0; i < n; ++i) {
    g.weyl[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = Word{};
    for (int j = i + 1; j < n; ++j) {
      const std::optional<Word> w =
          weyl_pair(classes, nd, protos, pulled, i, j);
      if (!w) {
        ++g.weyl_skipped;
        continue;
      }
      g.weyl[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = *w;
      Word rev(w->rbegin(), w->rend());
      if (nd.nested) rev = nd.nested->normal_form(rev);
      g.weyl[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
          std::move(rev);
    }
  }

  g.distance.assign(static_cast<std::size_t>(n),
                    std::vector<int>(static_cast<std::size_t>(n), -1));
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (const auto& [a, b] : g.edges) {
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  }
  for (int src = 0; src < n; ++src) {
    std::vector<int>& dist = g.distance[static_cast<std::size_t>(src)];
    dist[static_cast<std::size_t>(src)] = 0;
    std::vector<int> frontier{src};
    while (!frontier.empty()) {
      std::vector<int> next;
      for (int a : frontier)
        for (int b : adj[static_cast<std::size_t>(a)])
          if (dist[static_cast<std::size_t>(b)] < 0) {
            dist[static_cast<std::size_t>(b)] =
                dist[static_cast<std::size_t>(a)] + 1;
            next.push_back(b);
          }
      frontier = std::move(next);
    }
  }
  return g;
}

AxiomReport check_transversal_building(const TransversalSystem& classes) {
  AxiomReport rep;
  rep.check = "eta-axioms";
  const TransversalGraph g = transversal_graph(classes);
  const int n = static_cast<int>(classes.chambers().size());

  std::vector<int> stab;
  for (const TransversalChamber& ch : classes.chambers())
    if (ch.stabilized) stab.push_back(ch.id);
  rep.sources = static_cast<std::int64_t>(stab.size());

  const auto add = [&rep](std::string axiom, int source, int chamber, int s,
                          std::string detail) {
    ++rep.violation_count;
    if (rep.violations.size() < AxiomReport::kMaxRecorded)
      rep.violations.push_back({std::move(axiom), source, chamber, s,
                                std::move(detail)});
  };
  const auto entry = [&g](int a, int b) -> const std::optional<Word>& {
    return g.weyl[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  };

  // WD1: the Weyl distance vanishes exactly on the diagonal.
  for (int a : stab)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      const std::optional<Word>& w = entry(a, b);
      if (!w) continue;
      ++rep.pairs;
      if (w->empty())
        add("WD1", a, b, -1, "distinct classes at Weyl distance e");
    }

  // Panels and the WD2 / WD3 pattern, viewed from every stabilized class.
  const int ngens = static_cast<int>(g.generators.generators.size());
  std::set<std::pair<int, int>> edge_set(g.edges.begin(), g.edges.end());
  for (int owner : stab)
    for (int s = 0; s < ngens; ++s) {
      bool panel_partial = false;
      std::vector<int> panel{owner};
      for (int c = 0; c < n; ++c) {
        if (c == owner) continue;
        const std::optional<Word>& w = entry(owner, c);
        if (!w) {
          panel_partial = true;
          continue;
        }
        if (w->size() == 1 && w->front() == static_cast<Letter>(s))
          panel.push_back(c);
      }
      if (panel.size() == 1) {
        ++rep.skipped;  // the truncation can hide the rest of any panel
        continue;
      }
      ++rep.cells;

      for (int view : stab) {
        bool view_partial = panel_partial;
        std::vector<std::pair<int, Word>> values;
        for (int c : panel) {
          const std::optional<Word>& w = entry(view, c);
          if (!w) {
            view_partial = true;
            continue;
          }
          values.emplace_back(c, *w);
        }
        if (values.empty()) {
          ++rep.skipped;
          continue;
        }
        std::size_t lmin = values.front().second.size();
        for (const auto& [c, w] : values) lmin = std::min(lmin, w.size());
        const Word* vmin = nullptr;
        int min_count = 0;
        bool min_mixed = false;
        for (const auto& [c, w] : values) {
          if (w.size() != lmin) continue;
          ++min_count;
          if (!vmin) vmin = &w;
          else if (w != *vmin) min_mixed = true;
        }
        if (min_mixed) {
          add("WD2", view, owner, s, "two distinct gate values on a panel");
          continue;
        }
        Word vs = *vmin;
        vs.push_back(static_cast<Letter>(s));
        vs = g.system->normal_form(vs);

        int at_vs = 0;
        for (const auto& [c, w] : values) {
          if (w == *vmin) continue;
          if (w == vs) {
            ++at_vs;
            continue;
          }
          add("WD2", view, c, s,
              "Weyl distance " + word_str(w) + " outside {" + word_str(*vmin) +
                  ", " + word_str(vs) + "}");
        }
        if (vs.size() < lmin) {
          // The projection of the viewpoint must be realized on the panel.
          if (at_vs == 0) {
            if (view_partial) ++rep.skipped;
            else add("WD3", view, owner, s, "descent value not realized");
          }
        } else if (min_count > 1) {
          if (at_vs > 0)
            add("WD2", view, owner, s, "duplicated gate beside the ascent");
          else if (view_partial) ++rep.skipped;
          else add("WD3", view, owner, s, "no ascent from a duplicated gate");
        }
      }
    }

  // Metric glue between the scan graph, the path metric, and the words.
  for (std::size_t ai = 0; ai < stab.size(); ++ai)
    for (std::size_t bi = ai + 1; bi < stab.size(); ++bi) {
      const int a = stab[ai];
      const int b = stab[bi];
      const std::optional<Word>& w = entry(a, b);
      if (!w) {
        ++rep.skipped;
        continue;
      }
      const bool adjacent = edge_set.contains({std::min(a, b), std::max(a, b)});
      if (adjacent != (w->size() == 1))
        add("metric", a, b, -1,
            adjacent ? "adjacent classes at Weyl length != 1"
                     : "Weyl length 1 without a scanned edge");
      const int dist = g.distance[static_cast<std::size_t>(a)]
                                 [static_cast<std::size_t>(b)];
      if (dist < 0 || dist > static_cast<int>(w->size())) {
        ++rep.skipped;  // missing edges can stretch the truncated metric
      } else if (dist < static_cast<int>(w->size())) {
        add("metric", a, b, -1,
            "graph distance " + std::to_string(dist) +
                " shorter than Weyl length " + std::to_string(w->size()));
      }
    }
  return rep;
}

// ---------------------------------------------------------------------------
// Sector engine: hull unions along a defining ray per class.

struct SectorEngine::ClassRay {
  CgrRay ray;
  GroupElement coord;  // chart coordinate of the deepest station
  std::vector<ChamberId> stations;
  std::vector<std::vector<int>> rows;  // rows[n][i] = d(ball[i], stations[n])
};

SectorEngine::~SectorEngine() = default;

SectorEngine::SectorEngine(TransversalSystem classes, int horizon)
    : classes_(std::move(classes)), horizon_(horizon) {
  if (horizon_ < 1) throw std::invalid_argument("horizon must be positive");
  const Direction& dir = classes_.direction();
  ball_ = dir.building().ball(dir.base(), classes_.radius());
  ball_index_.reserve(ball_.size());
  for (std::size_t i = 0; i < ball_.size(); ++i)
    ball_index_.emplace(ball_[i], static_cast<int>(i));
  rays_.resize(classes_.chambers().size());
}

SectorEngine::ClassRay& SectorEngine::defining_ray(int class_id) {
  auto& slot = rays_.at(static_cast<std::size_t>(class_id));
  if (slot) return *slot;
  const Direction& dir = classes_.direction();
  for (ChamberId m : classes_.members(class_id)) {
    CgrRay ray;
    try {
      ray = straight_surrogate(m, dir, horizon_);
    } catch (const HorizonError&) {
      continue;
    }
    const ChamberId tail_base = ray.prefix.back();
    const std::optional<int> cls = classes_.class_of(tail_base);
    if (cls && *cls != class_id) continue;
    slot.emplace();
    slot->coord = dir.system().element(ray.tail_coord);
    slot->stations.push_back(tail_base);
    slot->ray = std::move(ray);
    return *slot;
  }
  throw HorizonError("no defining ray found for class " +
                     std::to_string(class_id));
}

const std::vector<int>& SectorEngine::station_row(int class_id, int n) {
  ClassRay& cr = defining_ray(class_id);
  const Direction& dir = classes_.direction();
  const CoxeterSystem& sys = dir.system();
  Building& bld = dir.building();
  while (static_cast<int>(cr.stations.size()) <= n) {
    cr.coord = sys.multiply(dir.period(), cr.coord);
    cr.stations.push_back(cr.ray.chart->chamber_at(cr.coord.word()));
  }
  while (static_cast<int>(cr.rows.size()) <= n) {
    const ChamberId st = cr.stations[cr.rows.size()];
    std::vector<int> row(ball_.size());
    for (std::size_t i = 0; i < ball_.size(); ++i)
      row[i] = bld.distance(ball_[i], st);
    cr.rows.push_back(std::move(row));
  }
  return cr.rows[static_cast<std::size_t>(n)];
}

SectorSlice SectorEngine::slice(ChamberId apex, int class_id) {
  const auto it = ball_index_.find(apex);
  if (it == ball_index_.end())
    throw std::invalid_argument("apex " + std::to_string(apex) +
                                " lies outside the slice ball");
  const int xi = it->second;
  classes_.chamber(class_id);

  const std::size_t words = (ball_.size() + 63) / 64;
  using Bits = std::vector<std::uint64_t>;

  // Membership bits of Conv(apex, C_n) against the ball: additive distances
  // through the apex's row and the station row.
  std::vector<int>& apex_row = apex_rows_.try_emplace(apex).first->second;
  if (apex_row.empty()) {
    Building& bld = classes_.direction().building();
    apex_row.resize(ball_.size());
    for (std::size_t i = 0; i < ball_.size(); ++i)
      apex_row[i] = bld.distance(apex, ball_[i]);
  }
  std::vector<std::optional<Bits>> conv;
  const auto conv_bits = [&](int nn) -> const Bits& {
    if (nn >= static_cast<int>(conv.size()))
      conv.resize(static_cast<std::size_t>(nn) + 1);
    auto& slot = conv[static_cast<std::size_t>(nn)];
    if (!slot) {
      const std::vector<int>& row = station_row(class_id, nn);
      const int dx = row[static_cast<std::size_t>(xi)];
      slot.emplace(words, 0);
      for (std::size_t i = 0; i < ball_.size(); ++i)
        if (apex_row[i] + row[i] == dx)
          (*slot)[i >> 6] |= std::uint64_t{1} << (i & 63);
    }
    return *slot;
  };

  const auto uKT = [&](int K, int T) -> Bits {
    Bits acc(words, 0);
    for (int k = 0; k <= K; ++k) {
      Bits inter(words, ~std::uint64_t{0});
      for (int nn = k; nn <= k + T; ++nn) {
        const Bits& m = conv_bits(nn);
        for (std::size_t wi = 0; wi < words; ++wi) inter[wi] &= m[wi];
      }
      for (std::size_t wi = 0; wi < words; ++wi) acc[wi] |= inter[wi];
    }
    return acc;
  };

  int T = classes_.direction().window() + 2;
  int K = 0;
  constexpr int kMaxRounds = 24;
  bool stabilized = false;
  Bits cur = uKT(K, T);
  for (int round = 0; round < kMaxRounds; ++round) {
    try {
      const Bits a = uKT(K + 1, T);
      const Bits b = uKT(K, T + 1);
      const Bits c = uKT(K + 1, T + 1);
      if (a == cur && b == cur && c == cur) {
        stabilized = true;
        break;
      }
      cur = c;
      ++K;
      ++T;
    } catch (const TruncationError&) {
      break;  // the data cannot realize deeper stations
    } catch (const HorizonError&) {
      break;
    }
  }

  SectorSlice out;
  out.apex = apex;
  out.class_id = class_id;
  out.radius = classes_.radius();
  out.chambers = bits_to_chambers(cur, ball_);
  out.stabilized = stabilized;
  return out;
}

SectorSlice sector(ChamberId apex, int class_id,
                   const TransversalSystem& classes, int horizon) {
  SectorEngine engine(classes, horizon);
  return engine.slice(apex, class_id);
}

// ---------------------------------------------------------------------------
// Oracle engine: witness rays with periodic tails.

struct SectorOracleEngine::Tail {
  GroupElement base;  // p, the tail base offset
};

SectorOracleEngine::~SectorOracleEngine() = default;

SectorOracleEngine::SectorOracleEngine(TransversalSystem classes, int horizon,
                                       int reach)
    : classes_(std::move(classes)), horizon_(horizon) {
  if (horizon_ < 1) throw std::invalid_argument("horizon must be positive");
  reach_ = reach < 0 ? 2 * classes_.radius() + 2 : reach;
  const Direction& dir = classes_.direction();
  const CoxeterSystem& sys = dir.system();
  Building& bld = dir.building();
  ball_ = bld.ball(dir.base(), classes_.radius());
  ball_index_.reserve(ball_.size());
  for (std::size_t i = 0; i < ball_.size(); ++i)
    ball_index_.emplace(ball_[i], static_cast<int>(i));

  // Planted positions u^(window + m) * p, m = 0..horizon+1; a candidate is
  // kept when its step p^-1 u p is certified straight over horizon+1 powers
  // (the walk crosses no wall twice) and every direction wall keeps a
  // constant side along the planted walk (the tail stays in one class, so
  // the witness converges to the class of its base chamber).  Candidates
  // whose words outgrow the system's bounds are dropped: they cannot be
  // realized inside the data anyway.
  std::vector<GroupElement> powers{sys.identity()};
  for (int k = 1; k <= dir.window() + horizon_ + 1; ++k)
    powers.push_back(sys.multiply(dir.period(), powers.back()));

  for (const GroupElement& p : sys.ball(reach_)) {
    try {
      const GroupElement q =
          sys.multiply(sys.multiply(sys.inverse(p), dir.period()), p);
      if (!sys.is_straight_certificate(q, horizon_ + 1)) continue;
      const GroupElement g0 =
          sys.multiply(powers[static_cast<std::size_t>(dir.window())], p);
      bool ok = true;
      std::vector<bool> base_sides;
      base_sides.reserve(dir.walls().size());
      for (const DirectionWall& dw : dir.walls())
        base_sides.push_back(sys.side(dw.wall, g0));
      for (int m = 1; m <= horizon_ + 1 && ok; ++m) {
        const GroupElement gm = sys.multiply(
            powers[static_cast<std::size_t>(dir.window() + m)], p);
        for (std::size_t wi = 0; wi < dir.walls().size() && ok; ++wi)
          if (sys.side(dir.walls()[wi].wall, gm) != base_sides[wi]) ok = false;
      }
      if (ok) tails_.push_back({p});
    } catch (const TruncationError&) {
      continue;
    }
  }
}

std::optional<int> SectorOracleEngine::classify(ChamberId tail_base) {
  if (const auto it = class_memo_.find(tail_base); it != class_memo_.end())
    return it->second;
  std::optional<int> out = classes_.class_of(tail_base);
  if (!out) {
    constexpr int kTries = 8;
    const Direction& dir = classes_.direction();
    const int n = static_cast<int>(classes_.chambers().size());
    for (int id = 0; id < n && !out; ++id) {
      const std::vector<ChamberId>& mem = classes_.members(id);
      int tries = 0;
      // Deep members first: they are likelier to share a frame with a deep
      // tail base.  One definite answer settles the whole class.
      for (auto rit = mem.rbegin(); rit != mem.rend() && tries < kTries;
           ++rit, ++tries) {
        try {
          if (phi_equal(tail_base, *rit, dir)) out = id;
          break;
        } catch (const HorizonError&) {
          continue;
        }
      }
    }
  }
  class_memo_.emplace(tail_base, out);
  return out;
}

SectorOracleResult SectorOracleEngine::all(ChamberId apex) {
  const auto xit = ball_index_.find(apex);
  if (xit == ball_index_.end())
    throw std::invalid_argument("apex " + std::to_string(apex) +
                                " lies outside the slice ball");
  const Direction& dir = classes_.direction();
  const CoxeterSystem& sys = dir.system();
  Building& bld = dir.building();
  const int lu = dir.period().length();
  const int n = static_cast<int>(classes_.chambers().size());
  const std::size_t words = (ball_.size() + 63) / 64;
  using Bits = std::vector<std::uint64_t>;

  SectorOracleResult res;
  res.slices.resize(static_cast<std::size_t>(n));
  std::vector<Bits> class_bits(static_cast<std::size_t>(n), Bits(words, 0));
  Bits indet(words, 0);

  const auto row = [&](ChamberId c) -> const std::vector<std::uint16_t>& {
    auto [it, inserted] = row_memo_.try_emplace(c);
    if (inserted) {
      it->second.resize(ball_.size());
      for (std::size_t i = 0; i < ball_.size(); ++i)
        it->second[i] = static_cast<std::uint16_t>(bld.distance(ball_[i], c));
    }
    return it->second;
  };
  const std::vector<std::uint16_t> apex_row = row(apex);

  std::unordered_set<ChamberId> done;
  for (int n0 = 0; n0 <= dir.window(); ++n0) {
    ApartmentChart chart = axis_frame_chart(dir, n0);
    try {
      extend_apartment(chart, {apex});
    } catch (const HorizonError&) {
      continue;
    }
    const GroupElement plant = dir.period_power(dir.window() - n0);
    for (const Tail& tail : tails_) {
      try {
        GroupElement coord = sys.multiply(plant, tail.base);
        const ChamberId base_ch = chart.chamber_at(coord.word());
        if (done.contains(base_ch)) continue;
        const int d0 = bld.distance(apex, base_ch);
        bool ok = true;
        for (int m = 1; m <= horizon_ + 1 && ok; ++m) {
          coord = sys.multiply(dir.period(), coord);
          const ChamberId st = chart.chamber_at(coord.word());
          if (bld.distance(apex, st) != d0 + m * lu) ok = false;
        }
        if (!ok) continue;
        done.insert(base_ch);
        const std::optional<int> cls = classify(base_ch);
        const std::vector<std::uint16_t>& base_row = row(base_ch);
        Bits& target = cls ? class_bits[static_cast<std::size_t>(*cls)] : indet;
        for (std::size_t i = 0; i < ball_.size(); ++i)
          if (static_cast<int>(apex_row[i]) + static_cast<int>(base_row[i]) ==
              d0)
            target[i >> 6] |= std::uint64_t{1} << (i & 63);
      } catch (const TruncationError&) {
        res.data_complete = false;
      } catch (const HorizonError&) {
        res.data_complete = false;
      }
    }
  }

  for (int id = 0; id < n; ++id)
    res.slices[static_cast<std::size_t>(id)] =
        bits_to_chambers(class_bits[static_cast<std::size_t>(id)], ball_);
  res.indeterminate = bits_to_chambers(indet, ball_);
  return res;
}

std::vector<ChamberId> sector_oracle(ChamberId apex, int class_id,
                                     const TransversalSystem& classes,
                                     int horizon, int reach) {
  SectorOracleEngine engine(classes, horizon, reach);
  classes.chamber(class_id);
  SectorOracleResult res = engine.all(apex);
  return std::move(res.slices.at(static_cast<std::size_t>(class_id)));
}

SectorMinResult sector_min(ChamberId apex, SectorEngine& engine) {
  const TransversalSystem& classes = engine.classes();
  const std::optional<int> own_id = classes.class_of(apex);
  if (!own_id)
    throw std::invalid_argument("apex " + std::to_string(apex) +
                                " has no class in the scan");
  SectorMinResult res;
  res.own = engine.slice(apex, *own_id);
  const std::vector<ChamberId>& own_members = classes.members(*own_id);

  const int n = static_cast<int>(classes.chambers().size());
  for (int id = 0; id < n; ++id) {
    SectorSlice sl = engine.slice(apex, id);
    if (!sl.stabilized || !res.own.stabilized) {
      ++res.skipped;
      continue;
    }
    ++res.checked;
    std::vector<ChamberId> restricted;
    std::set_intersection(sl.chambers.begin(), sl.chambers.end(),
                          own_members.begin(), own_members.end(),
                          std::back_inserter(restricted));
    if (restricted != res.own.chambers) res.failed.push_back(id);
  }
  return res;
}

}  // namespace bldg
