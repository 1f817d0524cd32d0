#include "bldg/building.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

namespace bldg {

Building::Building(std::shared_ptr<const CoxeterSystem> system)
    : system_(std::move(system)) {
  if (!system_)
    throw std::invalid_argument("building requires a Coxeter system");
}

Building::~Building() = default;

void Building::check_ball_complete(ChamberId, int) {}

void Building::delta_row(ChamberId from, const std::vector<ChamberId>& to,
                         Word& flat, std::vector<std::size_t>& offsets) {
  flat.clear();
  offsets.clear();
  offsets.reserve(to.size() + 1);
  offsets.push_back(0);
  for (ChamberId d : to) {
    const Word w = delta_word(from, d);
    flat.insert(flat.end(), w.begin(), w.end());
    offsets.push_back(flat.size());
  }
}

std::vector<ChamberId> Building::ball(ChamberId center, int radius) {
  if (radius < 0) throw std::invalid_argument("ball radius must be >= 0");
  if (radius > system().limits().max_ball_radius)
    throw TruncationError("chamber ball radius " + std::to_string(radius) +
                          " exceeds the configured bound " +
                          std::to_string(system().limits().max_ball_radius));
  check_ball_complete(center, radius);
  std::vector<ChamberId> out{center};
  std::unordered_set<ChamberId> seen{center};
  std::vector<ChamberId> level{center};
  for (int r = 1; r <= radius && !level.empty(); ++r) {
    std::vector<ChamberId> next;
    for (ChamberId c : level)
      for (int s = 0; s < rank(); ++s)
        for (ChamberId d : panel(c, s)) {
          if (d == c) continue;
          if (seen.insert(d).second) {
            next.push_back(d);
            out.push_back(d);
          }
        }
    level = std::move(next);
  }
  return out;
}

// ---------------------------------------------------------------------------
// ThinBuilding

ThinBuilding::ThinBuilding(std::shared_ptr<const CoxeterSystem> system)
    : Building(std::move(system)) {
  intern(Word{});
}

Word ThinBuilding::word_of(ChamberId c) const {
  std::lock_guard<std::mutex> lock(mu_);
  if (c < 0 || static_cast<std::size_t>(c) >= elements_.size())
    throw std::invalid_argument("chamber id out of range");
  return elements_[static_cast<std::size_t>(c)];
}

ChamberId ThinBuilding::intern(const Word& nf) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = index_.find(nf);
  if (it != index_.end()) return it->second;
  const ChamberId id = static_cast<ChamberId>(elements_.size());
  elements_.push_back(nf);
  index_.emplace(nf, id);
  return id;
}

std::size_t ThinBuilding::materialized() const {
  std::lock_guard<std::mutex> lock(mu_);
  return elements_.size();
}

GroupElement ThinBuilding::chamber_element(ChamberId c) const {
  return system().element(word_of(c));
}

ChamberId ThinBuilding::chamber_of(const GroupElement& g) {
  if (g.system() != &system())
    throw std::invalid_argument(
        "group element does not belong to this building's Coxeter system");
  return intern(g.word());
}

std::vector<ChamberId> ThinBuilding::panel(ChamberId c, int s) {
  if (s < 0 || s >= rank())
    throw std::invalid_argument("generator index out of range");
  Word w = word_of(c);
  w.push_back(static_cast<Letter>(s));
  return {c, intern(system().normal_form(w))};
}

GroupElement ThinBuilding::delta(ChamberId c, ChamberId d) {
  return system().element(delta_word(c, d));
}

Word ThinBuilding::delta_word(ChamberId c, ChamberId d) {
  const Word a = word_of(c);
  const Word b = word_of(d);
  Word w(a.rbegin(), a.rend());
  w.insert(w.end(), b.begin(), b.end());
  return system().normal_form(w);
}

int ThinBuilding::distance(ChamberId c, ChamberId d) {
  const Word a = word_of(c);
  const Word b = word_of(d);
  Word w(a.rbegin(), a.rend());
  w.insert(w.end(), b.begin(), b.end());
  return system().word_length(w);
}


std::string ThinBuilding::chamber_label(ChamberId c) const {
  return word_str(word_of(c));
}

// ---------------------------------------------------------------------------
// GraphProductBuilding

std::size_t GraphProductBuilding::SylHash::operator()(
    const SylWord& w) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (const Syllable& s : w) {
    h ^= s.v;
    h *= 1099511628211ull;
    h ^= s.e;
    h *= 1099511628211ull;
  }
  return h;
}

GraphProductBuilding::GraphProductBuilding(
    std::shared_ptr<const CoxeterSystem> system, std::vector<int> orders)
    : Building(std::move(system)), orders_(std::move(orders)) {
  if (!this->system().right_angled_backend())
    throw std::invalid_argument(
        "graph product buildings require a right-angled Coxeter system");
  if (orders_.size() != static_cast<std::size_t>(rank()))
    throw std::invalid_argument(
        "graph product needs one factor order per generator");
  for (int q : orders_)
    if (q < 2 || q > 0xffff)
      throw std::invalid_argument("factor orders must lie in [2, 65535]");
  if (rank() <= 64) {
    noncommute_.assign(static_cast<std::size_t>(rank()), 0);
    for (int v = 0; v < rank(); ++v)
      for (int w = 0; w < rank(); ++w)
        if (this->system().matrix().order(v, w) != 2)
          noncommute_[static_cast<std::size_t>(v)] |= std::uint64_t{1} << w;
  }
  intern({});
}

int GraphProductBuilding::order_of(int v) const {
  if (v < 0 || v >= rank())
    throw std::invalid_argument("generator index out of range");
  return orders_[static_cast<std::size_t>(v)];
}

GraphProductBuilding::SylWord GraphProductBuilding::reduce(SylWord w) const {
  const auto commute = [&](Letter a, Letter b) {
    return system().matrix().order(a, b) == 2;
  };
  // Merge same-vertex syllables separated only by commuting ones.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < w.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < w.size(); ++j) {
        if (w[j].v == w[i].v) {
          const int q = orders_[w[i].v];
          const int e = (w[i].e + w[j].e) % q;
          w.erase(w.begin() + static_cast<std::ptrdiff_t>(j));
          if (e == 0)
            w.erase(w.begin() + static_cast<std::ptrdiff_t>(i));
          else
            w[i].e = static_cast<std::uint16_t>(e);
          changed = true;
          break;
        }
        if (!commute(w[i].v, w[j].v)) break;
      }
    }
  }
  return w;
}

GraphProductBuilding::SylWord GraphProductBuilding::normalize(
    SylWord w) const {
  const auto commute = [&](Letter a, Letter b) {
    return system().matrix().order(a, b) == 2;
  };
  w = reduce(std::move(w));
  // Greedy least-vertex pass for a canonical representative.  Two movable
  // syllables never share a vertex (they would have merged), so comparing
  // vertices suffices.
  SylWord out;
  out.reserve(w.size());
  while (!w.empty()) {
    std::size_t best = w.size();
    for (std::size_t j = 0; j < w.size(); ++j) {
      bool movable = true;
      for (std::size_t k = 0; k < j && movable; ++k)
        movable = commute(w[j].v, w[k].v);
      if (movable && (best == w.size() || w[j].v < w[best].v)) best = j;
    }
    out.push_back(w[best]);
    w.erase(w.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return out;
}

GraphProductBuilding::SylWord GraphProductBuilding::mul(const SylWord& a,
                                                        const SylWord& b) const {
  SylWord w = a;
  w.insert(w.end(), b.begin(), b.end());
  return normalize(std::move(w));
}

GraphProductBuilding::SylWord GraphProductBuilding::inv(
    const SylWord& a) const {
  SylWord w(a.rbegin(), a.rend());
  for (Syllable& s : w)
    s.e = static_cast<std::uint16_t>(orders_[s.v] - s.e);
  return w;
}

GraphProductBuilding::SylWord GraphProductBuilding::word_of(
    ChamberId c) const {
  std::lock_guard<std::mutex> lock(mu_);
  if (c < 0 || static_cast<std::size_t>(c) >= elements_.size())
    throw std::invalid_argument("chamber id out of range");
  return elements_[static_cast<std::size_t>(c)];
}

ChamberId GraphProductBuilding::intern(const SylWord& nf) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = index_.find(nf);
  if (it != index_.end()) return it->second;
  const ChamberId id = static_cast<ChamberId>(elements_.size());
  elements_.push_back(nf);
  index_.emplace(nf, id);
  return id;
}

std::size_t GraphProductBuilding::materialized() const {
  std::lock_guard<std::mutex> lock(mu_);
  return elements_.size();
}

std::vector<ChamberId> GraphProductBuilding::panel(ChamberId c, int s) {
  if (s < 0 || s >= rank())
    throw std::invalid_argument("generator index out of range");
  const SylWord g = word_of(c);
  std::vector<ChamberId> out{c};
  for (int k = 1; k < orders_[static_cast<std::size_t>(s)]; ++k)
    out.push_back(intern(
        mul(g, {Syllable{static_cast<Letter>(s), static_cast<std::uint16_t>(k)}})));
  return out;
}

GroupElement GraphProductBuilding::delta(ChamberId c, ChamberId d) {
  return system().element(delta_word(c, d));
}

Word GraphProductBuilding::delta_word(ChamberId c, ChamberId d) {
  // The vertex word of the canonical syllable form is already the shortlex
  // normal form in W: both use the same greedy least-letter reordering.
  const SylWord r = mul(inv(word_of(c)), word_of(d));
  Word w;
  w.reserve(r.size());
  for (const Syllable& s : r) w.push_back(s.v);
  return w;
}

int GraphProductBuilding::distance(ChamberId c, ChamberId d) {
  SylWord w = inv(word_of(c));
  const SylWord b = word_of(d);
  w.insert(w.end(), b.begin(), b.end());
  return static_cast<int>(reduce(std::move(w)).size());
}

void GraphProductBuilding::append_reduced(SylWord& w, Syllable s0,
                                          SylWord& pending) const {
  // Appends a syllable to a reduced word, keeping it reduced: merge with
  // the nearest same-vertex syllable reachable across commuting ones; when
  // a merge cancels completely, re-append the displaced tail (annihilation
  // can expose new merges across the gap).
  pending.clear();
  pending.push_back(s0);
  while (!pending.empty()) {
    const Syllable s = pending.back();
    pending.pop_back();
    int i = static_cast<int>(w.size()) - 1;
    bool merged = false;
    while (i >= 0) {
      const Syllable& t = w[static_cast<std::size_t>(i)];
      if (t.v == s.v) {
        const int e = (t.e + s.e) % orders_[s.v];
        if (e != 0) {
          w[static_cast<std::size_t>(i)].e = static_cast<std::uint16_t>(e);
        } else {
          for (int j = static_cast<int>(w.size()) - 1; j > i; --j)
            pending.push_back(w[static_cast<std::size_t>(j)]);
          w.resize(static_cast<std::size_t>(i));
        }
        merged = true;
        break;
      }
      if (noncommute_[t.v] >> s.v & 1) break;
      --i;
    }
    if (!merged) w.push_back(s);
  }
}

void GraphProductBuilding::delta_row(ChamberId from,
                                     const std::vector<ChamberId>& to,
                                     Word& flat,
                                     std::vector<std::size_t>& offsets) {
  if (noncommute_.empty()) {  // rank > 64: no bit masks, take the slow path
    Building::delta_row(from, to, flat, offsets);
    return;
  }
  flat.clear();
  offsets.clear();
  offsets.reserve(to.size() + 1);
  offsets.push_back(0);
  // One lock for the whole row; nothing below touches the id maps.
  std::lock_guard<std::mutex> lock(mu_);
  const auto fetch = [&](ChamberId c) -> const SylWord& {
    if (c < 0 || static_cast<std::size_t>(c) >= elements_.size())
      throw std::invalid_argument("chamber id out of range");
    return elements_[static_cast<std::size_t>(c)];
  };
  const SylWord fi = inv(fetch(from));
  SylWord acc, pending;
  for (ChamberId d : to) {
    acc.assign(fi.begin(), fi.end());
    for (const Syllable& s : fetch(d)) append_reduced(acc, s, pending);
    // Emit the canonical vertex word: repeatedly take the least vertex
    // whose syllable commutes with everything before it.
    while (!acc.empty()) {
      std::uint64_t before = 0;
      std::size_t best = acc.size();
      for (std::size_t j = 0; j < acc.size(); ++j) {
        const Letter v = acc[j].v;
        if ((noncommute_[v] & before) == 0 &&
            (best == acc.size() || v < acc[best].v))
          best = j;
        before |= std::uint64_t{1} << v;
      }
      flat.push_back(acc[best].v);
      acc.erase(acc.begin() + static_cast<std::ptrdiff_t>(best));
    }
    offsets.push_back(flat.size());
  }
}

std::string GraphProductBuilding::chamber_label(ChamberId c) const {
  const SylWord w = word_of(c);
  if (w.empty()) return "e";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out.push_back('.');
    out += std::to_string(static_cast<int>(w[i].v));
    if (w[i].e != 1) out += "^" + std::to_string(static_cast<int>(w[i].e));
  }
  return out;
}

// ---------------------------------------------------------------------------
// LoadedBuilding

LoadedBuilding::LoadedBuilding(
    std::shared_ptr<const CoxeterSystem> system, std::int64_t chamber_count,
    int declared_radius,
    const std::vector<std::vector<std::vector<ChamberId>>>& panels)
    : Building(std::move(system)),
      count_(chamber_count),
      radius_(declared_radius) {
  if (count_ < 1) throw SpecError("a building needs at least one chamber");
  if (radius_ < 0) throw SpecError("declared radius must be >= 0");
  if (panels.size() != static_cast<std::size_t>(rank()))
    throw SpecError("expected one panel partition per generator, got " +
                    std::to_string(panels.size()));
  panel_members_.resize(panels.size());
  panel_of_.assign(panels.size(),
                   std::vector<std::int32_t>(
                       static_cast<std::size_t>(count_), -1));
  for (std::size_t s = 0; s < panels.size(); ++s) {
    for (const auto& group : panels[s]) {
      if (group.empty()) continue;
      const auto k = static_cast<std::int32_t>(panel_members_[s].size());
      for (ChamberId c : group) {
        if (c < 0 || c >= count_)
          throw SpecError("panel entry " + std::to_string(c) +
                          " is outside the chamber range");
        auto& slot = panel_of_[s][static_cast<std::size_t>(c)];
        if (slot != -1)
          throw SpecError("chamber " + std::to_string(c) +
                          " appears in two panels of generator " +
                          std::to_string(s));
        slot = k;
      }
      panel_members_[s].push_back(group);
    }
  }
  // Breadth-first depths from the base; the chamber set must be connected
  // and must respect the declared radius.
  base_depth_.assign(static_cast<std::size_t>(count_), -1);
  base_depth_[0] = 0;
  std::deque<ChamberId> queue{0};
  while (!queue.empty()) {
    const ChamberId c = queue.front();
    queue.pop_front();
    for (int s = 0; s < rank(); ++s)
      for (ChamberId d : panel(c, s))
        if (base_depth_[static_cast<std::size_t>(d)] == -1) {
          base_depth_[static_cast<std::size_t>(d)] =
              base_depth_[static_cast<std::size_t>(c)] + 1;
          queue.push_back(d);
        }
  }
  for (std::int64_t c = 0; c < count_; ++c) {
    const int dep = base_depth_[static_cast<std::size_t>(c)];
    if (dep == -1)
      throw SpecError("chamber " + std::to_string(c) +
                      " is not connected to the base");
    if (dep > radius_)
      throw SpecError("chamber " + std::to_string(c) + " sits at distance " +
                      std::to_string(dep) + ", beyond the declared radius " +
                      std::to_string(radius_));
  }
}

void LoadedBuilding::check_chamber(ChamberId c) const {
  if (c < 0 || c >= count_)
    throw std::invalid_argument("chamber id out of range");
}

std::vector<ChamberId> LoadedBuilding::panel(ChamberId c, int s) {
  check_chamber(c);
  if (s < 0 || s >= rank())
    throw std::invalid_argument("generator index out of range");
  const std::int32_t k = panel_of_[static_cast<std::size_t>(s)]
                                  [static_cast<std::size_t>(c)];
  if (k == -1) return {c};
  return panel_members_[static_cast<std::size_t>(s)]
                       [static_cast<std::size_t>(k)];
}

Word LoadedBuilding::delta_word(ChamberId c, ChamberId d) {
  check_chamber(c);
  check_chamber(d);
  if (c == d) return {};
  // Breadth-first search recording the entering letter of each chamber.
  std::vector<std::int32_t> pred(static_cast<std::size_t>(count_), -1);
  std::vector<Letter> letter(static_cast<std::size_t>(count_), 0);
  pred[static_cast<std::size_t>(c)] = static_cast<std::int32_t>(c);
  std::deque<ChamberId> queue{c};
  int found = -1;
  while (!queue.empty() && found == -1) {
    const ChamberId x = queue.front();
    queue.pop_front();
    for (int s = 0; s < rank() && found == -1; ++s)
      for (ChamberId y : panel(x, s)) {
        if (pred[static_cast<std::size_t>(y)] != -1) continue;
        pred[static_cast<std::size_t>(y)] = static_cast<std::int32_t>(x);
        letter[static_cast<std::size_t>(y)] = static_cast<Letter>(s);
        if (y == d) {
          found = 0;
          break;
        }
        queue.push_back(y);
      }
  }
  if (found == -1)
    throw Error("chamber " + std::to_string(d) +
                " unreachable from chamber " + std::to_string(c));
  Word w;
  for (ChamberId x = d; x != c;
       x = pred[static_cast<std::size_t>(x)])
    w.push_back(letter[static_cast<std::size_t>(x)]);
  std::reverse(w.begin(), w.end());
  // The gallery found is minimal only if every minimal gallery provably
  // stays inside the declared ball: any chamber z on one satisfies
  // 2 d(base, z) <= d(base, c) + d(base, d) + d(c, d).
  const int bound = base_depth_[static_cast<std::size_t>(c)] +
                    base_depth_[static_cast<std::size_t>(d)] +
                    static_cast<int>(w.size());
  if (bound > 2 * radius_)
    throw TruncationError(
        "Weyl distance between chambers " + std::to_string(c) + " and " +
        std::to_string(d) +
        " cannot be certified: minimal galleries may leave the declared "
        "radius " +
        std::to_string(radius_));
  return system().normal_form(w);
}

GroupElement LoadedBuilding::delta(ChamberId c, ChamberId d) {
  return system().element(delta_word(c, d));
}

void LoadedBuilding::delta_row(ChamberId from,
                               const std::vector<ChamberId>& to, Word& flat,
                               std::vector<std::size_t>& offsets) {
  check_chamber(from);
  flat.clear();
  offsets.clear();
  offsets.reserve(to.size() + 1);
  offsets.push_back(0);
  // One breadth-first search serves the whole row.
  std::vector<std::int32_t> pred(static_cast<std::size_t>(count_), -1);
  std::vector<Letter> letter(static_cast<std::size_t>(count_), 0);
  std::vector<int> dist(static_cast<std::size_t>(count_), -1);
  pred[static_cast<std::size_t>(from)] = static_cast<std::int32_t>(from);
  dist[static_cast<std::size_t>(from)] = 0;
  std::deque<ChamberId> queue{from};
  while (!queue.empty()) {
    const ChamberId x = queue.front();
    queue.pop_front();
    for (int s = 0; s < rank(); ++s)
      for (ChamberId y : panel(x, s)) {
        if (pred[static_cast<std::size_t>(y)] != -1) continue;
        pred[static_cast<std::size_t>(y)] = static_cast<std::int32_t>(x);
        letter[static_cast<std::size_t>(y)] = static_cast<Letter>(s);
        dist[static_cast<std::size_t>(y)] =
            dist[static_cast<std::size_t>(x)] + 1;
        queue.push_back(y);
      }
  }
  for (ChamberId d : to) {
    check_chamber(d);
    if (pred[static_cast<std::size_t>(d)] == -1)
      throw Error("chamber " + std::to_string(d) +
                  " unreachable from chamber " + std::to_string(from));
    const int bound = base_depth_[static_cast<std::size_t>(from)] +
                      base_depth_[static_cast<std::size_t>(d)] +
                      dist[static_cast<std::size_t>(d)];
    if (bound > 2 * radius_)
      throw TruncationError(
          "Weyl distance between chambers " + std::to_string(from) + " and " +
          std::to_string(d) +
          " cannot be certified: minimal galleries may leave the declared "
          "radius " +
          std::to_string(radius_));
    Word w;
    for (ChamberId x = d; x != from; x = pred[static_cast<std::size_t>(x)])
      w.push_back(letter[static_cast<std::size_t>(x)]);
    std::reverse(w.begin(), w.end());
    const Word nf = system().normal_form(w);
    flat.insert(flat.end(), nf.begin(), nf.end());
    offsets.push_back(flat.size());
  }
}

int LoadedBuilding::base_depth(ChamberId c) const {
  check_chamber(c);
  return base_depth_[static_cast<std::size_t>(c)];
}

void LoadedBuilding::check_ball_complete(ChamberId center, int radius) {
  check_chamber(center);
  if (base_depth_[static_cast<std::size_t>(center)] + radius > radius_)
    throw TruncationError(
        "ball of radius " + std::to_string(radius) + " around chamber " +
        std::to_string(center) +
        " may be clipped by the declared radius " + std::to_string(radius_));
}

std::string LoadedBuilding::chamber_label(ChamberId c) const {
  return "#" + std::to_string(c);
}

std::shared_ptr<ThinBuilding> build_thin(const CoxeterMatrix& m) {
  return std::make_shared<ThinBuilding>(std::make_shared<CoxeterSystem>(m));
}

std::shared_ptr<GraphProductBuilding> build_graph_product(
    const CoxeterMatrix& m, std::vector<int> orders) {
  return std::make_shared<GraphProductBuilding>(
      std::make_shared<CoxeterSystem>(m), std::move(orders));
}

std::shared_ptr<GraphProductBuilding> build_tree(int q0, int q1) {
  auto system = std::make_shared<CoxeterSystem>(CoxeterMatrix::dihedral(0));
  return std::make_shared<GraphProductBuilding>(std::move(system),
                                                std::vector<int>{q0, q1});
}

// ---------------------------------------------------------------------------
// Chamber-level operations

ChamberId proj_panel(Building& b, ChamberId c, int s, ChamberId d) {
  ChamberId best = -1;
  int best_dist = -1;
  bool unique = false;
  for (ChamberId y : b.panel(c, s)) {
    const int dist = b.distance(y, d);
    if (best == -1 || dist < best_dist) {
      best = y;
      best_dist = dist;
      unique = true;
    } else if (dist == best_dist) {
      unique = false;
    }
  }
  if (!unique)
    throw Error("panel (" + std::to_string(c) + ", " + std::to_string(s) +
                ") has no unique chamber nearest to " + std::to_string(d));
  return best;
}

std::vector<Gallery> minimal_galleries(Building& b, ChamberId c, ChamberId d,
                                       std::size_t limit) {
  std::vector<Gallery> out;
  if (limit == 0) return out;
  Gallery cur;
  cur.chambers.push_back(c);
  const auto walk = [&](auto&& self, ChamberId x, int r) -> bool {
    if (r == 0) {
      out.push_back(cur);
      return out.size() < limit;
    }
    for (int s = 0; s < b.rank(); ++s) {
      const ChamberId gate = proj_panel(b, x, s, d);
      if (gate == x) continue;
      if (b.distance(gate, d) != r - 1)
        throw Error("panel gate fails to shorten the gallery from " +
                    std::to_string(x) + " toward " + std::to_string(d));
      cur.chambers.push_back(gate);
      cur.type.push_back(static_cast<Letter>(s));
      const bool keep_going = self(self, gate, r - 1);
      cur.chambers.pop_back();
      cur.type.pop_back();
      if (!keep_going) return false;
    }
    return true;
  };
  walk(walk, c, b.distance(c, d));
  return out;
}

std::vector<ChamberId> conv_chambers(Building& b, ChamberId c, ChamberId d) {
  const int total = b.distance(c, d);
  std::vector<ChamberId> out{c};
  std::unordered_set<ChamberId> seen{c};
  std::vector<std::pair<ChamberId, int>> level{{c, total}};
  while (!level.empty()) {
    std::vector<std::pair<ChamberId, int>> next;
    for (const auto& [x, r] : level) {
      if (r == 0) continue;
      for (int s = 0; s < b.rank(); ++s)
        for (ChamberId y : b.panel(x, s)) {
          if (y == x || seen.contains(y)) continue;
          if (b.distance(y, d) == r - 1) {
            seen.insert(y);
            out.push_back(y);
            next.emplace_back(y, r - 1);
          }
        }
    }
    level = std::move(next);
  }
  return out;
}

}  // namespace bldg
