#include "bldg/oracle.hpp"

#include <algorithm>
#include <cstddef>
#include <unordered_map>

namespace bldg {

namespace {

using Mat = std::vector<std::int64_t>;  // n x n, row-major

struct MatHash {
  std::size_t operator()(const Mat& m) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (std::int64_t v : m) {
      h ^= static_cast<std::size_t>(v);
      h *= 1099511628211ull;
    }
    return h;
  }
};

// c(s,t) = 2 cos(pi / m(s,t)) for the supported orders.
std::int64_t coeff(int order) {
  switch (order) {
    case 2:
      return 0;
    case 3:
      return 1;
    case 0:
      return 2;
    default:
      throw std::invalid_argument(
          "matrix reference supports only pairwise orders 2, 3, and "
          "infinity; got " +
          std::to_string(order));
  }
}

Mat identity_mat(int n) {
  Mat m(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i) * n + i] = 1;
  return m;
}

// Generator matrix: identity except row s, where (s,t) = c(s,t) for t != s
// and (s,s) = -1.
Mat generator_mat(const CoxeterMatrix& cm, int s) {
  const int n = cm.rank();
  Mat m = identity_mat(n);
  for (int t = 0; t < n; ++t)
    m[static_cast<std::size_t>(s) * n + t] = (t == s) ? -1 : coeff(cm.order(s, t));
  return m;
}

Mat mat_mul(int n, const Mat& a, const Mat& b) {
  Mat c(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const std::int64_t aik = a[static_cast<std::size_t>(i) * n + k];
      if (aik == 0) continue;
      for (int j = 0; j < n; ++j)
        c[static_cast<std::size_t>(i) * n + j] +=
            aik * b[static_cast<std::size_t>(k) * n + j];
    }
  return c;
}

struct Enumeration {
  std::vector<Mat> gens;
  std::unordered_map<Mat, Word, MatHash> seen;  // matrix -> ShortLex NF
  std::vector<std::vector<std::pair<Word, Mat>>> levels;

  explicit Enumeration(const CoxeterMatrix& cm) {
    const int n = cm.rank();
    for (int s = 0; s < n; ++s) gens.push_back(generator_mat(cm, s));
    Mat id = identity_mat(n);
    seen.emplace(id, Word{});
    levels.push_back({{Word{}, std::move(id)}});
  }

  // Builds one more level; returns false when the group is exhausted.
  // Parents are processed in ShortLex order with letters ascending, so the
  // first discovery of an element goes through its ShortLex-least parent
  // and the recorded normal form is the ShortLex normal form.
  bool grow(const CoxeterMatrix& cm) {
    const int n = cm.rank();
    const auto& prev = levels.back();
    std::vector<std::pair<Word, Mat>> next;
    for (const auto& [w, mat] : prev) {
      for (int s = 0; s < n; ++s) {
        Mat child = mat_mul(n, mat, gens[static_cast<std::size_t>(s)]);
        Word cw = w;
        cw.push_back(static_cast<Letter>(s));
        if (seen.emplace(child, cw).second)
          next.emplace_back(std::move(cw), std::move(child));
      }
    }
    if (next.empty()) return false;
    levels.push_back(std::move(next));
    return true;
  }
};

}  // namespace

bool oracle_supported(const CoxeterMatrix& m) {
  for (int s = 0; s < m.rank(); ++s)
    for (int t = s + 1; t < m.rank(); ++t) {
      const int o = m.order(s, t);
      if (o != 2 && o != 3 && o != 0) return false;
    }
  return true;
}

std::vector<Word> oracle_ball(const CoxeterMatrix& m, int radius) {
  if (radius < 0) throw std::invalid_argument("ball radius must be >= 0");
  Enumeration e(m);
  for (int r = 1; r <= radius; ++r)
    if (!e.grow(m)) break;
  std::vector<Word> out;
  for (const auto& level : e.levels)
    for (const auto& [w, mat] : level) out.push_back(w);
  return out;
}

Word oracle_normal_form(const CoxeterMatrix& m, const Word& w) {
  for (Letter c : w)
    if (c >= m.rank())
      throw std::invalid_argument("generator index out of range");
  const int n = m.rank();
  Mat target = identity_mat(n);
  std::vector<Mat> gens;
  for (int s = 0; s < n; ++s) gens.push_back(generator_mat(m, s));
  for (Letter c : w) target = mat_mul(n, target, gens[c]);
  Enumeration e(m);
  for (int r = 0;; ++r) {
    auto it = e.seen.find(target);
    if (it != e.seen.end()) return it->second;
    if (r >= static_cast<int>(w.size()) || !e.grow(m)) break;
  }
  throw Error("matrix reference failed to locate a word of length " +
              std::to_string(w.size()));
}

}  // namespace bldg
