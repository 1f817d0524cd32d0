#include "bldg/apartment.hpp"

#include <algorithm>
#include <string>

namespace bldg {

namespace {

std::string coord_str(const Word& w) { return word_str(w); }

}  // namespace

ApartmentChart::ApartmentChart(std::shared_ptr<Building> building,
                               ChamberId center)
    : building_(std::move(building)) {
  if (!building_) throw Error("an apartment chart needs a building");
  insert(Word{}, center);
}

ChamberId ApartmentChart::center() const { return fwd_.at(Word{}); }

ChamberId ApartmentChart::at(const Word& nf) const {
  auto it = fwd_.find(nf);
  if (it == fwd_.end())
    throw Error("chart has no chamber at coordinate " + coord_str(nf));
  return it->second;
}

std::optional<Word> ApartmentChart::coord_of(ChamberId c) const {
  auto it = rev_.find(c);
  if (it == rev_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::pair<Word, ChamberId>> ApartmentChart::entries() const {
  std::vector<std::pair<Word, ChamberId>> out(fwd_.begin(), fwd_.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return shortlex_less(a.first, b.first);
  });
  return out;
}

bool ApartmentChart::consistent(ChamberId chamber, const Word& nf) const {
  const CoxeterSystem& sys = building_->system();
  for (const auto& [v, cv] : fwd_) {
    Word rel;
    rel.reserve(v.size() + nf.size());
    rel.assign(v.rbegin(), v.rend());  // generators are involutions
    rel.insert(rel.end(), nf.begin(), nf.end());
    if (building_->delta_word(cv, chamber) != sys.normal_form(rel))
      return false;
  }
  return true;
}

void ApartmentChart::insert(const Word& nf, ChamberId chamber) {
  fwd_.emplace(nf, chamber);
  rev_.emplace(chamber, nf);
}

void ApartmentChart::place(ChamberId chamber, const Word& coord) {
  const Word nf = building_->system().normal_form(coord);
  if (auto it = fwd_.find(nf); it != fwd_.end()) {
    if (it->second == chamber) return;
    throw HorizonError("no apartment found within horizon: coordinate " +
                       coord_str(nf) + " already holds chamber " +
                       std::to_string(it->second));
  }
  if (auto it = rev_.find(chamber); it != rev_.end())
    throw HorizonError("no apartment found within horizon: chamber " +
                       std::to_string(chamber) + " already sits at " +
                       coord_str(it->second));
  if (!consistent(chamber, nf))
    throw HorizonError("no apartment found within horizon: chamber " +
                       std::to_string(chamber) +
                       " is not Weyl-isometric to the chart at " +
                       coord_str(nf));
  insert(nf, chamber);
}

ChamberId ApartmentChart::chamber_at(const Word& coord) {
  const CoxeterSystem& sys = building_->system();
  const Word nf = sys.normal_form(coord);
  if (auto it = fwd_.find(nf); it != fwd_.end()) return it->second;

  // The not-yet-placed normal-form prefixes, in ascending length.  Normal
  // forms are prefix-closed, so each is a valid coordinate; entries that
  // already exist are pinned and never revisited by backtracking.
  std::vector<Word> todo;
  for (std::size_t len = 1; len <= nf.size(); ++len) {
    Word p(nf.begin(), nf.begin() + static_cast<std::ptrdiff_t>(len));
    if (!fwd_.contains(p)) todo.push_back(std::move(p));
  }

  struct Frame {
    Word coord;
    std::vector<ChamberId> candidates;
    std::size_t next = 0;
  };
  std::vector<Frame> stack;
  std::size_t idx = 0;
  while (idx < todo.size()) {
    if (stack.size() == idx) {
      const Word& p = todo[idx];
      const Word parent(p.begin(), p.end() - 1);
      const ChamberId pc = fwd_.at(parent);
      std::vector<ChamberId> candidates;
      for (ChamberId m : building_->panel(pc, p.back()))
        if (m != pc && !rev_.contains(m)) candidates.push_back(m);
      std::sort(candidates.begin(), candidates.end());
      stack.push_back(Frame{p, std::move(candidates)});
    }
    Frame& f = stack.back();
    bool placed = false;
    while (f.next < f.candidates.size()) {
      const ChamberId cand = f.candidates[f.next++];
      if (consistent(cand, f.coord)) {
        insert(f.coord, cand);
        placed = true;
        break;
      }
    }
    if (placed) {
      ++idx;
      continue;
    }
    stack.pop_back();
    if (stack.empty())
      throw HorizonError(
          "no apartment found within horizon: cannot reach coordinate " +
          coord_str(nf) + " from chamber " + std::to_string(center()));
    --idx;
    const Word& prev = stack.back().coord;
    rev_.erase(fwd_.at(prev));
    fwd_.erase(prev);
  }
  return fwd_.at(nf);
}

ApartmentChart& extend_apartment(ApartmentChart& chart,
                                 const std::vector<ChamberId>& targets) {
  Building& b = chart.building();
  const ChamberId center = chart.center();
  for (ChamberId t : targets) {
    if (chart.has_chamber(t)) continue;
    chart.place(t, b.delta_word(center, t));
  }
  return chart;
}

ChamberId retraction(ApartmentChart& chart, ChamberId center, ChamberId d) {
  const std::optional<Word> u = chart.coord_of(center);
  if (!u)
    throw Error("retraction center " + std::to_string(center) +
                " must lie in the chart");
  Word w = *u;
  const Word rel = chart.building().delta_word(center, d);
  w.insert(w.end(), rel.begin(), rel.end());
  try {
    return chart.chamber_at(w);
  } catch (const HorizonError& e) {
    throw HorizonError("chart coverage insufficient for retracting chamber " +
                       std::to_string(d) + ": " + e.what());
  }
}

}  // namespace bldg
