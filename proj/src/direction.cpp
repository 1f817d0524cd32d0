#include "bldg/direction.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace bldg {

namespace {

/// Walls crossed stepping from `at` along `steps`, one reflection per step.
/// When `steps` is reduced the walls are pairwise distinct.
std::vector<Reflection> crossing_walls(const CoxeterSystem& sys,
                                       GroupElement at, const Word& steps) {
  std::vector<Reflection> out;
  out.reserve(steps.size());
  for (Letter s : steps) {
    out.push_back(sys.reflection(at, s));
    at = sys.right_mul(at, s);
  }
  return out;
}

Reflection conjugate_wall(const CoxeterSystem& sys, const Reflection& t,
                          const GroupElement& g) {
  return sys.reflection_from(
      sys.multiply(sys.multiply(g, t.element), sys.inverse(g)));
}

}  // namespace

ApartmentChart axis_frame_chart(const Direction& dir, int n0) {
  ApartmentChart chart(dir.building_ptr(), dir.axis_chamber(n0));
  for (int m = n0 + 1; m <= dir.window(); ++m)
    chart.place(dir.axis_chamber(m), dir.period_power(m - n0).word());
  return chart;
}

std::optional<AxisFrame> find_axis_frame(
    const Direction& dir, const std::vector<ChamberId>& targets) {
  for (int n0 = 0; n0 <= dir.window(); ++n0) {
    ApartmentChart chart = axis_frame_chart(dir, n0);
    try {
      extend_apartment(chart, targets);
      return AxisFrame{std::move(chart), n0};
    } catch (const HorizonError&) {
      continue;
    }
  }
  return std::nullopt;
}

Reflection wall_in_frame(const Direction& dir, const Reflection& t, int n0) {
  if (n0 == 0) return t;
  const CoxeterSystem& sys = dir.system();
  return conjugate_wall(sys, t, sys.inverse(dir.period_power(n0)));
}

Reflection wall_in_base(const Direction& dir, const Reflection& t, int n0) {
  if (n0 == 0) return t;
  return conjugate_wall(dir.system(), t, dir.period_power(n0));
}

namespace {

/// Tail-base candidates in ShortLex order: the axis window's neighborhood
/// (coordinates u^i p with |p| <= one period) plus the same-size sidesteps
/// of the start coordinate itself.
std::vector<GroupElement> tail_candidates(const Direction& dir,
                                          const GroupElement& from) {
  const CoxeterSystem& sys = dir.system();
  const std::vector<GroupElement> side = sys.ball(dir.period().length());
  std::unordered_set<Word, WordHash> seen;
  std::vector<GroupElement> out;
  for (int i = 0; i <= dir.window(); ++i)
    for (const GroupElement& p : side) {
      GroupElement g = sys.multiply(dir.period_power(i), p);
      if (seen.insert(g.word()).second) out.push_back(std::move(g));
    }
  for (const GroupElement& p : side) {
    GroupElement g = sys.multiply(from, p);
    if (seen.insert(g.word()).second) out.push_back(std::move(g));
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// True when the periodic tail from `w` crosses one of the walls.  Checking
/// consecutive steps over one full window is exact: each wall is invariant
/// under u^k with k <= window, so its crossing pattern repeats with period k
/// and one crossing anywhere means one inside the window (and infinitely
/// many overall).
bool tail_crosses(const CoxeterSystem& sys, const Direction& dir,
                  const std::vector<Reflection>& walls,
                  const GroupElement& w) {
  if (walls.empty()) return false;
  GroupElement cur = w;
  for (int n = 0; n <= dir.window(); ++n) {
    const GroupElement next = sys.multiply(dir.period(), cur);
    for (const Reflection& t : walls)
      if (sys.separates(t, cur, next)) return true;
    cur = next;
  }
  return false;
}

/// Walks the tail gallery from `w` over `horizon + 1` periods (the extra
/// period is the stabilization margin) and reports whether any crossed wall
/// repeats a member of `seen`; tail walls are added to `seen` as the walk
/// proceeds, so internal repeats are caught too.
bool tail_collides(const CoxeterSystem& sys,
                   std::unordered_set<Word, WordHash>& seen,
                   const GroupElement& w, const Word& step, int horizon) {
  GroupElement cur = w;
  for (int n = 0; n <= horizon; ++n)
    for (Letter s : step) {
      if (!seen.insert(sys.reflection(cur, s).element.word()).second)
        return true;
      cur = sys.right_mul(cur, s);
    }
  return false;
}

/// Materializes the prefix gallery from `start` (at coordinate `from`) along
/// `steps` and fills in the ray descriptor.  Chart growth can throw
/// HorizonError or TruncationError, which callers treat as a data failure
/// for the candidate at hand.
CgrRay assemble_ray(const CoxeterSystem& sys, const Direction& dir,
                    std::shared_ptr<ApartmentChart> chart, ChamberId start,
                    const GroupElement& from, const Word& steps, int n0,
                    int horizon) {
  CgrRay ray;
  ray.period = dir.period();
  ray.frame = n0;
  ray.horizon = horizon;
  ray.chart = std::move(chart);
  GroupElement cur = from;
  ray.prefix.push_back(start);
  ray.prefix_coords.push_back(cur.word());
  for (Letter s : steps) {
    cur = sys.right_mul(cur, s);
    ray.prefix.push_back(ray.chart->chamber_at(cur.word()));
    ray.prefix_coords.push_back(cur.word());
  }
  ray.tail_coord = cur.word();
  ray.tail_base_frame = sys.multiply(dir.period_power(n0), cur).word();
  return ray;
}

/// The per-period step word of the tail from `w`: delta(w, u w) as a reduced
/// word, the same for every period.
GroupElement tail_step(const CoxeterSystem& sys, const Direction& dir,
                       const GroupElement& w) {
  return sys.multiply(sys.multiply(sys.inverse(w), dir.period()), w);
}

/// The constant side of `t` held by the base-frame tail u^n w.  A tail that
/// crosses the wall between consecutive steps has no stable side.
bool stable_side(const CoxeterSystem& sys, const Direction& dir,
                 const Reflection& t, const GroupElement& w) {
  GroupElement cur = w;
  for (int n = 0; n <= dir.window(); ++n) {
    const GroupElement next = sys.multiply(dir.period(), cur);
    if (sys.separates(t, cur, next))
      throw StabilizationError("ray tail crosses direction wall " + t.str() +
                               " every period; its side never stabilizes");
    cur = next;
  }
  return sys.side(t, w);
}

}  // namespace

ChamberId Direction::axis_chamber(int n) const {
  if (n < 0 || n >= static_cast<int>(axis_.size()))
    throw std::invalid_argument("axis chamber index " + std::to_string(n) +
                                " outside window 0.." +
                                std::to_string(window_));
  return axis_[static_cast<size_t>(n)];
}

const GroupElement& Direction::period_power(int n) const {
  if (n < 0 || n >= static_cast<int>(powers_.size()))
    throw std::invalid_argument("period power " + std::to_string(n) +
                                " outside range 0.." +
                                std::to_string(window_ + 1));
  return powers_[static_cast<size_t>(n)];
}

bool Direction::is_direction_wall(const Word& reflection_nf) const {
  for (const DirectionWall& dw : walls_)
    if (dw.wall.element.word() == reflection_nf) return true;
  return false;
}

Direction make_direction(const ApartmentChart& chart, ChamberId base,
                         const GroupElement& period, int window) {
  const CoxeterSystem& sys = chart.building().system();
  if (period.system() != &sys)
    throw std::invalid_argument(
        "direction period belongs to a different Coxeter system");
  if (window < 1)
    throw std::invalid_argument("direction window must be at least 1");
  if (period.is_identity())
    throw std::invalid_argument("direction period must not be the identity");
  if (base != chart.center())
    throw std::invalid_argument(
        "direction base must be the chart center (the chamber at e)");

  const int certify = std::max(window + 1, CoxeterSystem::kStraightPower);
  if (!sys.is_straight_certificate(period, certify))
    throw Error("period " + period.str() +
                " fails the straightness certificate at power " +
                std::to_string(certify));

  Direction dir;
  dir.building_ = chart.building_ptr();
  dir.chart_ = std::make_shared<ApartmentChart>(chart);
  dir.base_ = base;
  dir.period_ = period;
  dir.window_ = window;
  dir.powers_.reserve(static_cast<size_t>(window) + 2);
  dir.powers_.push_back(sys.identity());
  for (int n = 1; n <= window + 1; ++n)
    dir.powers_.push_back(sys.multiply(dir.powers_.back(), period));
  dir.axis_.reserve(static_cast<size_t>(window) + 1);
  for (int n = 0; n <= window; ++n)
    dir.axis_.push_back(
        dir.chart_->chamber_at(dir.powers_[static_cast<size_t>(n)].word()));

  // Adjacency walls of the axis neighborhood are the candidates; a wall
  // separating two neighborhood chambers also separates one of them from the
  // neighborhood's anchor, so it shows up between ShortLex-geodesic steps
  // that stay inside the neighborhood.
  const std::vector<GroupElement> near = sys.ball(window);
  std::unordered_set<Word, WordHash> hood;
  std::vector<GroupElement> hood_elems;
  for (int i = 0; i <= window; ++i)
    for (const GroupElement& p : near) {
      GroupElement g = sys.multiply(dir.powers_[static_cast<size_t>(i)], p);
      if (hood.insert(g.word()).second) hood_elems.push_back(std::move(g));
    }

  std::unordered_set<Word, WordHash> cand_seen;
  std::vector<Reflection> cands;
  for (const GroupElement& c : hood_elems)
    for (int s = 0; s < sys.rank(); ++s) {
      const GroupElement mate = sys.right_mul(c, s);
      if (!hood.contains(mate.word())) continue;
      Reflection t = sys.reflection(c, s);
      if (cand_seen.insert(t.element.word()).second)
        cands.push_back(std::move(t));
    }
  std::sort(cands.begin(), cands.end());

  for (const Reflection& t : cands) {
    int invariance = 0;
    try {
      GroupElement g = t.element;
      for (int k = 1; k <= window; ++k) {
        g = sys.multiply(sys.multiply(period, g), sys.inverse(period));
        if (g == t.element) {
          invariance = k;
          break;
        }
      }
    } catch (const TruncationError&) {
      // The conjugate orbit left the word-problem table before returning.
      // A wall this scan certifies has an orbit that comes back within the
      // window; one that escapes the table cannot be certified under the
      // system's limits and is dropped rather than guessed at (raise the
      // limits to push the boundary out).
      invariance = 0;
    }
    if (invariance == 0) continue;
    // An invariant wall crossed by the axis would be crossed once per
    // period, contradicting the straightness certificate; fail loudly
    // rather than hand out a wall the axis does not respect.
    for (int n = 1; n <= window + 1; ++n)
      if (sys.separates(t, dir.powers_[0], dir.powers_[static_cast<size_t>(n)]))
        throw Error("direction wall " + t.str() +
                    " separates axis translates; period " + period.str() +
                    " is not straight along it");
    dir.walls_.push_back(
        DirectionWall{t, invariance, sys.side(t, dir.powers_[0])});
  }
  return dir;
}

std::vector<ChamberId> materialize_ray(CgrRay& ray, int periods) {
  if (!ray.chart) throw std::invalid_argument("ray has no chart");
  if (periods < 0)
    throw std::invalid_argument("period count must be non-negative");
  if (ray.prefix.empty())
    throw std::invalid_argument("ray has an empty prefix");
  const CoxeterSystem& sys = ray.chart->building().system();
  std::vector<ChamberId> out = ray.prefix;
  GroupElement cur = sys.element(ray.tail_coord);
  const Word step =
      sys.multiply(sys.multiply(sys.inverse(cur), ray.period), cur).word();
  for (int n = 0; n < periods; ++n)
    for (Letter s : step) {
      cur = sys.right_mul(cur, s);
      out.push_back(ray.chart->chamber_at(cur.word()));
    }
  return out;
}

bool is_cgr(const std::vector<ChamberId>& path, const ApartmentChart& chart) {
  if (path.size() <= 1) return true;
  const CoxeterSystem& sys = chart.building().system();
  std::vector<GroupElement> coords;
  coords.reserve(path.size());
  for (ChamberId c : path) {
    const std::optional<Word> w = chart.coord_of(c);
    if (!w)
      throw Error("ray check: chamber " + std::to_string(c) +
                  " is not in the chart");
    coords.push_back(sys.element(*w));
  }
  std::unordered_set<Word, WordHash> seen;
  for (size_t i = 0; i + 1 < coords.size(); ++i) {
    const GroupElement d =
        sys.multiply(sys.inverse(coords[i]), coords[i + 1]);
    if (d.length() != 1)
      throw std::invalid_argument(
          "ray check: chambers " + std::to_string(path[i]) + " and " +
          std::to_string(path[i + 1]) + " are not distinct panel mates");
    if (!seen.insert(sys.reflection(coords[i], d.word()[0]).element.word())
             .second)
      return false;
  }
  return true;
}

bool is_cgr(const CgrRay& ray, const Direction& dir) {
  const CoxeterSystem& sys = dir.system();
  if (ray.prefix_coords.empty() ||
      ray.prefix_coords.size() != ray.prefix.size())
    throw std::invalid_argument("malformed ray: prefix and coordinates differ");
  std::unordered_set<Word, WordHash> seen;
  GroupElement cur = sys.element(ray.prefix_coords.front());
  for (size_t i = 0; i + 1 < ray.prefix_coords.size(); ++i) {
    const GroupElement next = sys.element(ray.prefix_coords[i + 1]);
    const GroupElement d = sys.multiply(sys.inverse(cur), next);
    if (d.length() != 1)
      throw std::invalid_argument(
          "malformed ray: prefix coordinates must step one panel at a time");
    if (!seen.insert(sys.reflection(cur, d.word()[0]).element.word()).second)
      return false;
    cur = next;
  }
  const Word step = tail_step(sys, dir, cur).word();
  const int periods = std::max(ray.horizon, dir.window());
  for (int n = 0; n < periods; ++n)
    for (Letter s : step) {
      if (!seen.insert(sys.reflection(cur, s).element.word()).second)
        return false;
      cur = sys.right_mul(cur, s);
    }
  return true;
}

bool phi_equal(ChamberId x, ChamberId y, const Direction& dir) {
  if (x == y) return true;
  if (dir.walls().empty()) return true;
  const CoxeterSystem& sys = dir.system();
  const std::optional<AxisFrame> frame = find_axis_frame(dir, {x, y});
  if (!frame)
    throw HorizonError("no common compatible chart within horizon: chambers " +
                       std::to_string(x) + " and " + std::to_string(y) +
                       " with a tail of the direction's axis");
  const GroupElement vx = sys.element(*frame->chart.coord_of(x));
  const GroupElement vy = sys.element(*frame->chart.coord_of(y));
  for (const DirectionWall& dw : dir.walls()) {
    const Reflection t = wall_in_frame(dir, dw.wall, frame->n0);
    if (sys.separates(t, vx, vy)) return false;
  }
  return true;
}

std::vector<ChamberId> phi_class(ChamberId x, const Direction& dir,
                                 int radius) {
  if (radius < 0) throw std::invalid_argument("radius must be non-negative");
  Building& bld = dir.building();
  const CoxeterSystem& sys = dir.system();
  std::vector<ChamberId> ball = bld.ball(dir.base(), radius);
  std::unordered_set<ChamberId> in_ball(ball.begin(), ball.end());
  if (!in_ball.contains(x))
    throw std::invalid_argument("chamber " + std::to_string(x) +
                                " lies outside ball(" +
                                std::to_string(dir.base()) + ", " +
                                std::to_string(radius) + ")");
  if (dir.walls().empty()) {
    std::sort(ball.begin(), ball.end());
    return ball;
  }

  // Frame charts with the axis pinned, copied per pair and extended to it.
  std::vector<std::optional<ApartmentChart>> protos(
      static_cast<size_t>(dir.window()) + 1);
  const auto frame_proto = [&](int n0) -> const ApartmentChart& {
    auto& slot = protos[static_cast<size_t>(n0)];
    if (!slot) slot.emplace(axis_frame_chart(dir, n0));
    return *slot;
  };

  // An adjacent pair is joined iff its panel wall, read off in the first
  // frame that holds both chambers, is not a direction wall.  Distinct
  // chambers of one panel differ by exactly that panel's generator, so the
  // panel wall is the only wall separating them.
  const auto joined = [&](ChamberId a, ChamberId b, int s) -> bool {
    for (int n0 = 0; n0 <= dir.window(); ++n0) {
      ApartmentChart chart = frame_proto(n0);
      try {
        extend_apartment(chart, {a, b});
      } catch (const HorizonError&) {
        continue;
      }
      const GroupElement va = sys.element(*chart.coord_of(a));
      const Reflection t =
          wall_in_base(dir, sys.reflection(va, s), n0);
      return !dir.is_direction_wall(t.element.word());
    }
    return false;  // no compatible chart: contributes no edge
  };

  std::unordered_map<uint64_t, bool> edge_memo;
  const auto edge = [&](ChamberId a, ChamberId b, int s) -> bool {
    const ChamberId lo = std::min(a, b);
    const ChamberId hi = std::max(a, b);
    const uint64_t key =
        (static_cast<uint64_t>(lo) << 32) | static_cast<uint64_t>(hi);
    if (const auto it = edge_memo.find(key); it != edge_memo.end())
      return it->second;
    const bool j = joined(a, b, s);
    edge_memo.emplace(key, j);
    return j;
  };

  std::vector<ChamberId> component;
  std::unordered_set<ChamberId> visited{x};
  std::vector<ChamberId> stack{x};
  while (!stack.empty()) {
    const ChamberId c = stack.back();
    stack.pop_back();
    component.push_back(c);
    for (int s = 0; s < bld.rank(); ++s)
      for (ChamberId m : bld.panel(c, s)) {
        if (m == c || !in_ball.contains(m) || visited.contains(m)) continue;
        if (!edge(c, m, s)) continue;
        visited.insert(m);
        stack.push_back(m);
      }
  }
  std::sort(component.begin(), component.end());
  return component;
}

CgrRay straight_surrogate(ChamberId x, const Direction& dir, int horizon) {
  if (horizon < 1)
    throw std::invalid_argument("surrogate horizon must be at least 1");
  const CoxeterSystem& sys = dir.system();
  std::optional<AxisFrame> frame = find_axis_frame(dir, {x});
  if (!frame)
    throw HorizonError("no compatible chart within horizon for chamber " +
                       std::to_string(x) +
                       " alongside the direction's axis");
  const int n0 = frame->n0;
  auto chart = std::make_shared<ApartmentChart>(std::move(frame->chart));
  const GroupElement vx = sys.element(*chart->coord_of(x));

  std::vector<Reflection> eta;
  std::unordered_set<Word, WordHash> eta_words;
  for (const DirectionWall& dw : dir.walls()) {
    Reflection t = wall_in_frame(dir, dw.wall, n0);
    eta_words.insert(t.element.word());
    eta.push_back(std::move(t));
  }

  bool data_failure = false;
  for (const GroupElement& w : tail_candidates(dir, vx)) {
    try {
      const GroupElement q = tail_step(sys, dir, w);
      if (!sys.is_straight_certificate(q, horizon + 1)) continue;
      if (tail_crosses(sys, dir, eta, w)) continue;
      const GroupElement rel = sys.multiply(sys.inverse(vx), w);
      std::unordered_set<Word, WordHash> seen = eta_words;
      bool clash = false;
      for (const Reflection& t : crossing_walls(sys, vx, rel.word()))
        if (!seen.insert(t.element.word()).second) {
          clash = true;
          break;
        }
      if (clash) continue;
      if (tail_collides(sys, seen, w, q.word(), horizon)) continue;
      return assemble_ray(sys, dir, chart, x, vx, rel.word(), n0, horizon);
    } catch (const TruncationError&) {
      data_failure = true;
    } catch (const HorizonError&) {
      data_failure = true;
    }
  }
  throw HorizonError("no straight ray from chamber " + std::to_string(x) +
                     (data_failure ? " within the data horizon"
                                   : " within the search horizon"));
}

ExtendVerdict extend_to_cgr(ChamberId x, ChamberId y, const Direction& dir,
                            int horizon) {
  if (horizon < 1)
    throw std::invalid_argument("extension horizon must be at least 1");
  const CoxeterSystem& sys = dir.system();
  std::optional<AxisFrame> frame = find_axis_frame(dir, {x, y});
  if (!frame) return ExtendVerdict{std::nullopt, false};
  const int n0 = frame->n0;
  auto chart = std::make_shared<ApartmentChart>(std::move(frame->chart));
  const GroupElement vx = sys.element(*chart->coord_of(x));
  const GroupElement vy = sys.element(*chart->coord_of(y));
  // Every minimal gallery x -> y crosses exactly the walls separating x
  // from y, so one reduced word stands for them all.
  const GroupElement through = sys.multiply(sys.inverse(vx), vy);
  const std::vector<Reflection> sep_walls =
      crossing_walls(sys, vx, through.word());

  std::vector<Reflection> eta;
  for (const DirectionWall& dw : dir.walls())
    eta.push_back(wall_in_frame(dir, dw.wall, n0));

  bool data_failure = false;
  for (const GroupElement& w : tail_candidates(dir, vy)) {
    try {
      const GroupElement q = tail_step(sys, dir, w);
      if (!sys.is_straight_certificate(q, horizon + 1)) continue;
      if (tail_crosses(sys, dir, eta, w)) continue;
      const GroupElement rel = sys.multiply(sys.inverse(vy), w);
      std::unordered_set<Word, WordHash> seen;
      for (const Reflection& t : sep_walls) seen.insert(t.element.word());
      bool clash = false;
      for (const Reflection& t : crossing_walls(sys, vy, rel.word()))
        if (!seen.insert(t.element.word()).second) {
          clash = true;
          break;
        }
      if (clash) continue;
      if (tail_collides(sys, seen, w, q.word(), horizon)) continue;
      Word steps = through.word();
      steps.insert(steps.end(), rel.word().begin(), rel.word().end());
      return ExtendVerdict{
          assemble_ray(sys, dir, chart, x, vx, steps, n0, horizon), true};
    } catch (const TruncationError&) {
      data_failure = true;
    } catch (const HorizonError&) {
      data_failure = true;
    }
  }
  return ExtendVerdict{std::nullopt, !data_failure};
}

std::optional<std::vector<bool>> wall_sides(ChamberId x, const Direction& dir) {
  const CoxeterSystem& sys = dir.system();
  const std::optional<AxisFrame> frame = find_axis_frame(dir, {x});
  if (!frame) return std::nullopt;
  const GroupElement g = sys.multiply(
      dir.period_power(frame->n0), sys.element(*frame->chart.coord_of(x)));
  std::vector<bool> out;
  out.reserve(dir.walls().size());
  for (const DirectionWall& dw : dir.walls()) out.push_back(sys.side(dw.wall, g));
  return out;
}

std::vector<bool> tail_sides(const CgrRay& ray, const Direction& dir) {
  if (!(ray.period == dir.period()))
    throw std::invalid_argument("ray does not share the direction's period");
  const CoxeterSystem& sys = dir.system();
  const GroupElement w = sys.element(ray.tail_base_frame);
  std::vector<bool> out;
  out.reserve(dir.walls().size());
  for (const DirectionWall& dw : dir.walls())
    out.push_back(stable_side(sys, dir, dw.wall, w));
  return out;
}

bool same_limit(const CgrRay& a, const CgrRay& b, const Direction& dir) {
  if (!(a.period == dir.period()) || !(b.period == dir.period()))
    throw std::invalid_argument("rays do not share the direction's period");
  return tail_sides(a, dir) == tail_sides(b, dir);
}

}  // namespace bldg
