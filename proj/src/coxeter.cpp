#include "bldg/coxeter.hpp"

#include <algorithm>
#include <cstddef>
#include <unordered_set>
#include <utility>

namespace bldg {

std::string word_str(const Word& w) {
  if (w.empty()) return "e";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out.push_back('.');
    out += std::to_string(static_cast<int>(w[i]));
  }
  return out;
}

bool shortlex_less(const Word& a, const Word& b) noexcept {
  if (a.size() != b.size()) return a.size() < b.size();
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::size_t WordHash::operator()(const Word& w) const noexcept {
  std::size_t h = 1469598103934665603ull;  // FNV-1a
  for (Letter c : w) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// ---------------------------------------------------------------------------
// CoxeterMatrix

CoxeterMatrix::CoxeterMatrix(int rank, std::vector<int> entries)
    : rank_(rank), entries_(std::move(entries)) {
  if (rank < 1) throw std::invalid_argument("Coxeter matrix rank must be >= 1");
  if (entries_.size() != static_cast<std::size_t>(rank) * rank)
    throw std::invalid_argument("Coxeter matrix needs rank*rank entries");
  for (int s = 0; s < rank; ++s) {
    for (int t = 0; t < rank; ++t) {
      int m = entries_[static_cast<std::size_t>(s) * rank + t];
      if (s == t) {
        if (m != 1)
          throw std::invalid_argument("Coxeter matrix diagonal must be 1");
      } else {
        if (m == 1 || m < 0)
          throw std::invalid_argument(
              "Coxeter matrix off-diagonal entries must be >= 2 (or 0 for "
              "infinity)");
        if (m != entries_[static_cast<std::size_t>(t) * rank + s])
          throw std::invalid_argument("Coxeter matrix must be symmetric");
      }
    }
  }
}

int CoxeterMatrix::order(int s, int t) const {
  if (s < 0 || s >= rank_ || t < 0 || t >= rank_)
    throw std::invalid_argument("generator index out of range");
  return entries_[static_cast<std::size_t>(s) * rank_ + t];
}

bool CoxeterMatrix::right_angled() const noexcept {
  for (int s = 0; s < rank_; ++s)
    for (int t = s + 1; t < rank_; ++t) {
      int m = entries_[static_cast<std::size_t>(s) * rank_ + t];
      if (m != 2 && m != 0) return false;
    }
  return true;
}

CoxeterMatrix CoxeterMatrix::dihedral(int m) {
  return CoxeterMatrix(2, {1, m, m, 1});
}

CoxeterMatrix CoxeterMatrix::product(const CoxeterMatrix& a,
                                     const CoxeterMatrix& b) {
  int n = a.rank() + b.rank();
  std::vector<int> e(static_cast<std::size_t>(n) * n, 2);
  for (int s = 0; s < a.rank(); ++s)
    for (int t = 0; t < a.rank(); ++t)
      e[static_cast<std::size_t>(s) * n + t] = a.order(s, t);
  for (int s = 0; s < b.rank(); ++s)
    for (int t = 0; t < b.rank(); ++t)
      e[static_cast<std::size_t>(a.rank() + s) * n + (a.rank() + t)] =
          b.order(s, t);
  return CoxeterMatrix(n, std::move(e));
}

// ---------------------------------------------------------------------------
// Right-angled backend: syllable shuffling.
//
// In a right-angled system the reduced words of an element form a single
// commutation class, so deleting equal pairs separated only by commuting
// letters reaches a reduced word, and a greedy least-movable-letter pass
// yields the ShortLex-least representative.

namespace {

bool ra_commute(const CoxeterMatrix& m, Letter a, Letter b) {
  return m.order(a, b) == 2;
}

void ra_reduce(const CoxeterMatrix& m, Word& w) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < w.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < w.size(); ++j) {
        if (w[j] == w[i]) {
          w.erase(w.begin() + j);
          w.erase(w.begin() + i);
          changed = true;
          break;
        }
        if (!ra_commute(m, w[i], w[j])) break;  // blocks any later match
      }
    }
  }
}

// Greedy ShortLex pass over a reduced word: repeatedly emit the smallest
// letter that commutes with everything before it in the remaining word.
Word ra_lexmin(const CoxeterMatrix& m, const Word& w) {
  Word rest = w;
  Word out;
  out.reserve(w.size());
  while (!rest.empty()) {
    std::size_t best = rest.size();
    for (std::size_t j = 0; j < rest.size(); ++j) {
      bool movable = true;
      for (std::size_t k = 0; k < j && movable; ++k)
        movable = ra_commute(m, rest[j], rest[k]);
      if (movable && (best == rest.size() || rest[j] < rest[best])) best = j;
    }
    out.push_back(rest[best]);
    rest.erase(rest.begin() + best);
  }
  return out;
}

Word ra_normal_form(const CoxeterMatrix& m, Word w) {
  ra_reduce(m, w);
  return ra_lexmin(m, w);
}

constexpr std::int32_t kNoEdge = -1;

}  // namespace

// ---------------------------------------------------------------------------
// General backend: a lazily grown multiplication table.
//
// Elements are enumerated level by level (level = length), each level in
// ShortLex order.  When processing an element w of length k with a letter s
// whose edge is still unknown, the product x = w s is a brand new element of
// length k+1, and every one of its other parents is located immediately:
// if t is another right descent of x then m = m(s,t) is finite (two right
// descents always span a finite dihedral residue), the residue's lowest
// element z is reached from w by the strictly descending alternating walk
// t, s, t, ... of m-1 steps, and the parent p = x t sits at the top of the
// alternating climb from z of m-1 steps ending in s.  Recording the t-edge
// between p and x right away guarantees that each element is created exactly
// once, by its ShortLex-least parent, so first-touch normal forms are the
// ShortLex normal forms.
//
// Invariants: every existing element has all of its descending edges; an
// element's ascending edges all exist once its level has been processed.

struct CoxeterSystem::Table {
  std::vector<Word> nf;                  // id -> ShortLex normal form
  std::vector<std::int32_t> edge;        // id * rank + s -> id, or kNoEdge
  std::vector<std::size_t> level_begin;  // level k -> first id of length k
  int radius_complete = 0;  // every element of length <= this exists, and
                            // all edges between them are recorded
  bool exhausted = false;   // the whole (finite) group is enumerated

  std::size_t size() const { return nf.size(); }
  int level(std::int32_t id) const {
    return static_cast<int>(nf[static_cast<std::size_t>(id)].size());
  }

  bool run_phase(const CoxeterMatrix& mat, int k);
  void ensure_radius(const CoxeterMatrix& mat, const SystemLimits& limits,
                     int radius);
  std::int32_t step(const CoxeterMatrix& mat, const SystemLimits& limits,
                    std::int32_t id, Letter c);
};

bool CoxeterSystem::Table::run_phase(const CoxeterMatrix& mat, int k) {
  const int rank = mat.rank();
  const std::size_t lo = level_begin[static_cast<std::size_t>(k)];
  const std::size_t hi = level_begin[static_cast<std::size_t>(k) + 1];
  if (lo == hi) return false;
  for (std::size_t id = lo; id < hi; ++id) {
    for (int s = 0; s < rank; ++s) {
      if (edge[id * rank + s] != kNoEdge) continue;
      // Create x = id * s, a new element of length k+1.
      const std::int32_t x = static_cast<std::int32_t>(size());
      Word w = nf[id];
      w.push_back(static_cast<Letter>(s));
      nf.push_back(std::move(w));
      edge.resize(edge.size() + rank, kNoEdge);
      edge[id * rank + s] = x;
      edge[static_cast<std::size_t>(x) * rank + s] =
          static_cast<std::int32_t>(id);
      // Locate all other parents of x through dihedral residues.
      for (int t = 0; t < rank; ++t) {
        if (t == s) continue;
        const int m = mat.order(s, t);
        if (m == 0) continue;  // infinite residue: t cannot also descend
        // Walk down from id along t, s, t, ... for m-1 strict descents.
        std::int32_t cur = static_cast<std::int32_t>(id);
        bool ok = true;
        for (int i = 0; i < m - 1 && ok; ++i) {
          const int letter = (i % 2 == 0) ? t : s;
          const std::int32_t nxt =
              edge[static_cast<std::size_t>(cur) * rank + letter];
          if (nxt == kNoEdge || level(nxt) >= level(cur))
            ok = false;
          else
            cur = nxt;
        }
        if (!ok) continue;
        // Climb from the residue floor along the alternating word of length
        // m-1 that ends in s; the climb stays inside already-built levels.
        std::int32_t p = cur;
        for (int j = 0; j < m - 1; ++j) {
          const int letter = ((m - 2 - j) % 2 == 0) ? s : t;
          p = edge[static_cast<std::size_t>(p) * rank + letter];
          if (p == kNoEdge)
            throw Error("multiplication table integrity failure");
        }
        // Now p == x t.
        std::int32_t& slot = edge[static_cast<std::size_t>(p) * rank + t];
        if (slot != kNoEdge && slot != x)
          throw Error("multiplication table integrity failure");
        slot = x;
        edge[static_cast<std::size_t>(x) * rank + t] = p;
      }
    }
  }
  level_begin.push_back(size());
  return true;
}

void CoxeterSystem::Table::ensure_radius(const CoxeterMatrix& mat,
                                         const SystemLimits& limits,
                                         int radius) {
  while (radius_complete < radius && !exhausted) {
    if (radius_complete >= limits.max_table_radius)
      throw TruncationError(
          "word problem query needs elements of length " +
          std::to_string(radius_complete + 1) +
          ", beyond the configured multiplication table radius " +
          std::to_string(limits.max_table_radius));
    if (run_phase(mat, radius_complete))
      ++radius_complete;
    else
      exhausted = true;
  }
}

std::int32_t CoxeterSystem::Table::step(const CoxeterMatrix& mat,
                                        const SystemLimits& limits,
                                        std::int32_t id, Letter c) {
  const int rank = mat.rank();
  std::int32_t e = edge[static_cast<std::size_t>(id) * rank + c];
  if (e != kNoEdge) return e;
  ensure_radius(mat, limits, level(id) + 1);
  e = edge[static_cast<std::size_t>(id) * rank + c];
  if (e == kNoEdge) throw Error("multiplication table integrity failure");
  return e;
}

// ---------------------------------------------------------------------------
// CoxeterSystem

CoxeterSystem::CoxeterSystem(CoxeterMatrix matrix, SystemLimits limits)
    : matrix_(std::move(matrix)),
      limits_(limits),
      right_angled_(matrix_.right_angled()) {
  if (!right_angled_) {
    table_ = std::make_unique<Table>();
    table_->nf.push_back({});
    table_->edge.assign(static_cast<std::size_t>(rank()), kNoEdge);
    table_->level_begin = {0, 1};
  }
}

CoxeterSystem::~CoxeterSystem() = default;

Word CoxeterSystem::nf_internal(const Word& w) const {
  for (Letter c : w)
    if (c >= rank())
      throw std::invalid_argument("generator index " +
                                  std::to_string(static_cast<int>(c)) +
                                  " out of range");
  if (right_angled_) return ra_normal_form(matrix_, w);
  std::lock_guard<std::mutex> lock(mu_);
  std::int32_t id = 0;
  for (Letter c : w) id = table_->step(matrix_, limits_, id, c);
  return table_->nf[static_cast<std::size_t>(id)];
}

GroupElement CoxeterSystem::identity() const { return GroupElement(this, {}); }

GroupElement CoxeterSystem::generator(int s) const {
  if (s < 0 || s >= rank())
    throw std::invalid_argument("generator index out of range");
  return GroupElement(this, Word{static_cast<Letter>(s)});
}

GroupElement CoxeterSystem::element(const Word& w) const {
  return GroupElement(this, nf_internal(w));
}

Word CoxeterSystem::normal_form(const Word& w) const { return nf_internal(w); }

int CoxeterSystem::word_length(const Word& w) const {
  if (right_angled_) {
    for (Letter c : w)
      if (c >= rank())
        throw std::invalid_argument("generator index " +
                                    std::to_string(static_cast<int>(c)) +
                                    " out of range");
    Word v = w;
    ra_reduce(matrix_, v);
    return static_cast<int>(v.size());
  }
  return static_cast<int>(nf_internal(w).size());
}

void CoxeterSystem::check_same(const GroupElement& a) const {
  if (a.system() != this)
    throw std::invalid_argument(
        "group element does not belong to this Coxeter system");
}

GroupElement CoxeterSystem::multiply(const GroupElement& a,
                                     const GroupElement& b) const {
  check_same(a);
  check_same(b);
  Word w = a.word();
  w.insert(w.end(), b.word().begin(), b.word().end());
  return GroupElement(this, nf_internal(w));
}

GroupElement CoxeterSystem::right_mul(const GroupElement& a, int s) const {
  check_same(a);
  if (s < 0 || s >= rank())
    throw std::invalid_argument("generator index out of range");
  Word w = a.word();
  w.push_back(static_cast<Letter>(s));
  return GroupElement(this, nf_internal(w));
}

GroupElement CoxeterSystem::left_mul(int s, const GroupElement& a) const {
  check_same(a);
  if (s < 0 || s >= rank())
    throw std::invalid_argument("generator index out of range");
  Word w;
  w.reserve(a.word().size() + 1);
  w.push_back(static_cast<Letter>(s));
  w.insert(w.end(), a.word().begin(), a.word().end());
  return GroupElement(this, nf_internal(w));
}

GroupElement CoxeterSystem::inverse(const GroupElement& a) const {
  check_same(a);
  Word w(a.word().rbegin(), a.word().rend());
  return GroupElement(this, nf_internal(w));
}

GroupElement CoxeterSystem::conjugate(const GroupElement& g,
                                      const GroupElement& x) const {
  check_same(g);
  check_same(x);
  Word w = g.word();
  w.insert(w.end(), x.word().begin(), x.word().end());
  w.insert(w.end(), g.word().rbegin(), g.word().rend());
  return GroupElement(this, nf_internal(w));
}

std::vector<Reflection> CoxeterSystem::inversion_set(
    const GroupElement& a) const {
  check_same(a);
  const Word& w = a.word();
  std::vector<Reflection> out;
  out.reserve(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    // Prefix reflection (w_1 ... w_i) w_{i+1} (w_i ... w_1).
    Word t(w.begin(), w.begin() + i + 1);
    for (std::size_t j = i; j-- > 0;) t.push_back(w[j]);
    out.push_back(Reflection{GroupElement(this, nf_internal(t))});
  }
  std::sort(out.begin(), out.end());
  return out;
}

Reflection CoxeterSystem::reflection(const GroupElement& w, int s) const {
  check_same(w);
  if (s < 0 || s >= rank())
    throw std::invalid_argument("generator index out of range");
  Word t = w.word();
  t.push_back(static_cast<Letter>(s));
  t.insert(t.end(), w.word().rbegin(), w.word().rend());
  return Reflection{GroupElement(this, nf_internal(t))};
}

bool CoxeterSystem::is_reflection(const GroupElement& e) const {
  check_same(e);
  const Word& w = e.word();
  if (w.size() % 2 == 0) return false;
  // Every reduced word of a reflection crosses the reflection's own wall at
  // its middle letter, so e is a reflection exactly when it equals p s p^-1
  // for the middle split of its normal form.
  const std::size_t k = w.size() / 2;
  Word probe(w.begin(), w.begin() + k + 1);
  for (std::size_t j = k; j-- > 0;) probe.push_back(w[j]);
  return nf_internal(probe) == w;
}

Reflection CoxeterSystem::reflection_from(const GroupElement& e) const {
  if (!is_reflection(e))
    throw std::invalid_argument("element " + e.str() + " is not a reflection");
  return Reflection{e};
}

bool CoxeterSystem::side(const Reflection& t, const GroupElement& a) const {
  return multiply(t.element, a).length() > a.length();
}

bool CoxeterSystem::separates(const Reflection& t, const GroupElement& a,
                              const GroupElement& b) const {
  return side(t, a) != side(t, b);
}

std::vector<GroupElement> CoxeterSystem::conv(const GroupElement& a,
                                              const GroupElement& b) const {
  check_same(a);
  check_same(b);
  const GroupElement w = multiply(inverse(a), b);
  if (w.length() > limits_.max_conv_length)
    throw TruncationError("interval span " + std::to_string(w.length()) +
                          " exceeds the configured bound " +
                          std::to_string(limits_.max_conv_length));
  // Corridor search: grow v keeping length(v) + length(v^-1 w) == length(w).
  std::unordered_set<Word, WordHash> seen;
  std::vector<std::pair<GroupElement, GroupElement>> frontier;  // (v, v^-1 w)
  std::vector<std::pair<Word, GroupElement>> collected;         // (v, a v)
  frontier.emplace_back(identity(), w);
  seen.insert(Word{});
  while (!frontier.empty()) {
    std::vector<std::pair<GroupElement, GroupElement>> next;
    for (const auto& [v, rest] : frontier) {
      collected.emplace_back(v.word(), multiply(a, v));
      if (rest.is_identity()) continue;
      for (int s = 0; s < rank(); ++s) {
        const GroupElement r2 = left_mul(s, rest);
        if (r2.length() != rest.length() - 1) continue;
        const GroupElement v2 = right_mul(v, s);
        if (seen.insert(v2.word()).second) next.emplace_back(v2, r2);
      }
    }
    frontier = std::move(next);
  }
  std::sort(collected.begin(), collected.end(),
            [](const auto& x, const auto& y) {
              return shortlex_less(x.first, y.first);
            });
  std::vector<GroupElement> out;
  out.reserve(collected.size());
  for (auto& [vw, z] : collected) out.push_back(std::move(z));
  return out;
}

std::vector<GroupElement> CoxeterSystem::ball(int radius) const {
  if (radius < 0) throw std::invalid_argument("ball radius must be >= 0");
  if (radius > limits_.max_ball_radius)
    throw TruncationError("ball radius " + std::to_string(radius) +
                          " exceeds the configured bound " +
                          std::to_string(limits_.max_ball_radius));
  std::vector<GroupElement> out;
  if (!right_angled_) {
    std::lock_guard<std::mutex> lock(mu_);
    table_->ensure_radius(matrix_, limits_, radius);
    const int top = std::min<int>(
        radius, static_cast<int>(table_->level_begin.size()) - 2);
    const std::size_t end =
        table_->level_begin[static_cast<std::size_t>(top) + 1];
    out.reserve(end);
    for (std::size_t id = 0; id < end; ++id)
      out.push_back(GroupElement(this, table_->nf[id]));
    return out;
  }
  // Right-angled: breadth-first growth with normal-form deduplication.
  std::unordered_set<Word, WordHash> seen;
  std::vector<Word> level{Word{}};
  seen.insert(Word{});
  out.push_back(identity());
  for (int r = 1; r <= radius && !level.empty(); ++r) {
    std::vector<Word> next;
    for (const Word& w : level) {
      for (int s = 0; s < rank(); ++s) {
        Word cand = w;
        cand.push_back(static_cast<Letter>(s));
        Word n = ra_normal_form(matrix_, cand);
        if (static_cast<int>(n.size()) != r) continue;
        if (seen.insert(n).second) next.push_back(std::move(n));
      }
    }
    std::sort(next.begin(), next.end(), shortlex_less);
    for (const Word& w : next) out.push_back(GroupElement(this, w));
    level = std::move(next);
  }
  return out;
}

bool CoxeterSystem::is_straight_certificate(const GroupElement& u,
                                            int max_power) const {
  check_same(u);
  if (u.is_identity())
    throw std::invalid_argument(
        "straightness certificate requires a non-identity element");
  if (max_power < 1)
    throw std::invalid_argument("certificate power must be >= 1");
  GroupElement pow = u;
  for (int k = 2; k <= max_power; ++k) {
    pow = multiply(pow, u);
    if (pow.length() != k * u.length()) return false;
  }
  return true;
}

}  // namespace bldg
