#include "bldg/classification.hpp"

#include <algorithm>
#include <cstdint>

namespace bldg {

std::string type_class_str(TypeClass c) {
  switch (c) {
    case TypeClass::Finite:
      return "finite";
    case TypeClass::Affine:
      return "affine";
    case TypeClass::Indefinite:
      return "indefinite";
  }
  return "?";
}

CoxeterMatrix restrict_matrix(const CoxeterMatrix& m,
                              const std::vector<int>& J) {
  for (std::size_t i = 0; i < J.size(); ++i) {
    if (J[i] < 0 || J[i] >= m.rank())
      throw std::invalid_argument("generator subset index out of range");
    if (i + 1 < J.size() && J[i] >= J[i + 1])
      throw std::invalid_argument(
          "generator subset must be strictly ascending");
  }
  if (J.empty())
    throw std::invalid_argument("cannot restrict to an empty generator set");
  const int n = static_cast<int>(J.size());
  std::vector<int> e(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      e[static_cast<std::size_t>(i) * n + j] = m.order(J[i], J[j]);
  return CoxeterMatrix(n, std::move(e));
}

namespace {

/// Matches one connected diagram component against the irreducible finite
/// and affine families.  `verts` holds global generator indices; orders are
/// read through the full matrix.
ComponentType classify_component(const CoxeterMatrix& m,
                                 std::vector<int> verts) {
  const int n = static_cast<int>(verts.size());
  ComponentType out;
  out.vertices = std::move(verts);
  auto ord = [&](int i, int j) {
    return m.order(out.vertices[static_cast<std::size_t>(i)],
                   out.vertices[static_cast<std::size_t>(j)]);
  };
  auto finite = [&](std::string name) {
    out.cls = TypeClass::Finite;
    out.name = std::move(name);
    return out;
  };
  auto affine = [&](std::string name) {
    out.cls = TypeClass::Affine;
    out.name = std::move(name);
    return out;
  };
  auto indefinite = [&] {
    out.cls = TypeClass::Indefinite;
    out.name = "indefinite";
    return out;
  };

  if (n == 1) return finite("A1");
  if (n == 2) {
    const int o = ord(0, 1);
    if (o == 0) return affine("A~1");
    if (o == 3) return finite("A2");
    if (o == 4) return finite("B2");
    if (o == 6) return finite("G2");
    return finite("I2(" + std::to_string(o) + ")");
  }

  // Rank >= 3: no irreducible finite or affine diagram carries an infinite
  // bond, so classify by graph shape and bond labels.
  std::vector<int> deg(n, 0);
  int edges = 0;
  bool infinite_bond = false;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const int o = ord(i, j);
      if (o == 2) continue;
      if (o == 0) infinite_bond = true;
      ++edges;
      ++deg[i];
      ++deg[j];
    }
  if (infinite_bond) return indefinite();

  if (edges >= n + 1) return indefinite();
  if (edges == n) {
    // Single cycle: the only admissible family is the all-3 cycle.
    for (int i = 0; i < n; ++i)
      if (deg[i] != 2) return indefinite();
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const int o = ord(i, j);
        if (o != 2 && o != 3) return indefinite();
      }
    return affine("A~" + std::to_string(n - 1));
  }

  // Tree.
  const int maxdeg = *std::max_element(deg.begin(), deg.end());
  if (maxdeg >= 4) {
    // The only admissible diagram with a degree-4 vertex is the all-3 star
    // on five vertices.
    if (n != 5 || maxdeg != 4) return indefinite();
    int leaves = 0;
    for (int i = 0; i < n; ++i) leaves += deg[i] == 1;
    if (leaves != 4) return indefinite();
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const int o = ord(i, j);
        if (o != 2 && o != 3) return indefinite();
      }
    return affine("D~4");
  }

  std::vector<int> branch;
  for (int i = 0; i < n; ++i)
    if (deg[i] == 3) branch.push_back(i);

  auto neighbors = [&](int i) {
    std::vector<int> nb;
    for (int j = 0; j < n; ++j)
      if (j != i && ord(i, j) != 2) nb.push_back(j);
    return nb;
  };

  if (branch.empty()) {
    // Path: read the bond sequence from one endpoint and canonicalize up to
    // reversal.
    int start = 0;
    while (deg[start] != 1) ++start;
    std::vector<int> seq;
    int prev = -1, cur = start;
    while (static_cast<int>(seq.size()) < n - 1) {
      for (int j : neighbors(cur)) {
        if (j == prev) continue;
        seq.push_back(ord(cur, j));
        prev = cur;
        cur = j;
        break;
      }
    }
    std::vector<int> rev(seq.rbegin(), seq.rend());
    if (rev < seq) seq = rev;  // seq is now lex-least of the two readings

    const int big = *std::max_element(seq.begin(), seq.end());
    const auto count = [&](int o) {
      return std::count(seq.begin(), seq.end(), o);
    };
    if (big == 3) return finite("A" + std::to_string(n));
    if (big == 4 && count(4) == 1 && count(3) == n - 2) {
      if (seq.back() == 4) return finite("B" + std::to_string(n));
      if (n == 4 && seq[1] == 4) return finite("F4");
      if (n == 5 && seq[2] == 4) return affine("F~4");
      return indefinite();
    }
    if (big == 4 && count(4) == 2 && count(3) == n - 3 && seq.front() == 4 &&
        seq.back() == 4)
      return affine("C~" + std::to_string(n - 1));
    if (big == 5 && count(5) == 1 && count(3) == n - 2 && seq.back() == 5) {
      if (n == 3) return finite("H3");
      if (n == 4) return finite("H4");
      return indefinite();
    }
    if (big == 6 && count(6) == 1 && count(3) == n - 2 && n == 3 &&
        (seq.front() == 6 || seq.back() == 6))
      return affine("G~2");
    return indefinite();
  }

  if (branch.size() == 1) {
    // Three arms hanging off one vertex.  Walk each arm collecting its
    // length and bond labels (from the branch outward).
    const int b = branch[0];
    struct Arm {
      int len = 0;
      std::vector<int> labels;
    };
    std::vector<Arm> arms;
    for (int first : neighbors(b)) {
      Arm a;
      int prev = b, cur = first;
      a.labels.push_back(ord(b, first));
      ++a.len;
      while (deg[cur] == 2) {
        for (int j : neighbors(cur)) {
          if (j == prev) continue;
          a.labels.push_back(ord(cur, j));
          prev = cur;
          cur = j;
          ++a.len;
          break;
        }
      }
      if (deg[cur] != 1) return indefinite();  // reached another branch
      arms.push_back(std::move(a));
    }
    std::sort(arms.begin(), arms.end(),
              [](const Arm& x, const Arm& y) { return x.len < y.len; });
    const int a1 = arms[0].len, a2 = arms[1].len, a3 = arms[2].len;
    int fours = 0, others = 0;
    bool four_terminal_longest = false;
    for (const Arm& a : arms)
      for (std::size_t i = 0; i < a.labels.size(); ++i) {
        const int o = a.labels[i];
        if (o == 3) continue;
        if (o == 4) {
          ++fours;
          if (a.len == a3 && i + 1 == a.labels.size())
            four_terminal_longest = true;
        } else {
          ++others;
        }
      }
    if (others > 0) return indefinite();
    if (fours == 0) {
      if (a1 == 1 && a2 == 1) return finite("D" + std::to_string(n));
      if (a1 == 1 && a2 == 2 && a3 == 2) return finite("E6");
      if (a1 == 1 && a2 == 2 && a3 == 3) return finite("E7");
      if (a1 == 1 && a2 == 2 && a3 == 4) return finite("E8");
      if (a1 == 2 && a2 == 2 && a3 == 2) return affine("E~6");
      if (a1 == 1 && a2 == 3 && a3 == 3) return affine("E~7");
      if (a1 == 1 && a2 == 2 && a3 == 5) return affine("E~8");
      return indefinite();
    }
    if (fours == 1 && a1 == 1 && a2 == 1 && four_terminal_longest)
      return affine("B~" + std::to_string(n - 1));
    return indefinite();
  }

  if (branch.size() == 2) {
    // Double fork: all bonds 3, each branch vertex carrying two leaves.
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const int o = ord(i, j);
        if (o != 2 && o != 3) return indefinite();
      }
    for (int b : branch) {
      int leaf_nb = 0;
      for (int j : neighbors(b)) leaf_nb += deg[j] == 1;
      if (leaf_nb != 2) return indefinite();
    }
    int leaves = 0;
    for (int i = 0; i < n; ++i) leaves += deg[i] == 1;
    if (leaves != 4) return indefinite();
    return affine("D~" + std::to_string(n - 1));
  }

  return indefinite();
}

}  // namespace

ParabolicType classify_parabolic(const CoxeterMatrix& m,
                                 const std::vector<int>& J) {
  for (std::size_t i = 0; i < J.size(); ++i) {
    if (J[i] < 0 || J[i] >= m.rank())
      throw std::invalid_argument("generator subset index out of range");
    if (i + 1 < J.size() && J[i] >= J[i + 1])
      throw std::invalid_argument(
          "generator subset must be strictly ascending");
  }
  ParabolicType out;
  // Connected components of the diagram restricted to J.
  std::vector<int> comp_of(J.size(), -1);
  int ncomp = 0;
  for (std::size_t i = 0; i < J.size(); ++i) {
    if (comp_of[i] != -1) continue;
    std::vector<std::size_t> stack{i};
    comp_of[i] = ncomp;
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t u = 0; u < J.size(); ++u)
        if (comp_of[u] == -1 && m.order(J[v], J[u]) != 2) {
          comp_of[u] = ncomp;
          stack.push_back(u);
        }
    }
    ++ncomp;
  }
  for (int c = 0; c < ncomp; ++c) {
    std::vector<int> verts;
    for (std::size_t i = 0; i < J.size(); ++i)
      if (comp_of[i] == c) verts.push_back(J[i]);
    out.components.push_back(classify_component(m, std::move(verts)));
  }
  bool all_finite = true, all_affine = !out.components.empty();
  for (const auto& c : out.components) {
    all_finite = all_finite && c.cls == TypeClass::Finite;
    all_affine = all_affine && c.cls == TypeClass::Affine;
  }
  out.cls = all_finite   ? TypeClass::Finite
            : all_affine ? TypeClass::Affine
                         : TypeClass::Indefinite;
  return out;
}

ParabolicType classify_group(const CoxeterMatrix& m) {
  std::vector<int> all(m.rank());
  for (int i = 0; i < m.rank(); ++i) all[i] = i;
  return classify_parabolic(m, all);
}

std::string ParabolicType::name() const {
  if (components.empty()) return "trivial";
  std::string out;
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (i) out += " x ";
    out += components[i].name;
  }
  return out;
}

namespace {

std::vector<int> mask_to_subset(std::uint32_t mask) {
  std::vector<int> J;
  for (int i = 0; mask; ++i, mask >>= 1)
    if (mask & 1) J.push_back(i);
  return J;
}

std::string subset_str(const std::vector<int>& J) {
  std::string out = "{";
  for (std::size_t i = 0; i < J.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(J[i]);
  }
  return out + "}";
}

}  // namespace

MoussongReport is_hyperbolic(const CoxeterMatrix& m) {
  const int n = m.rank();
  if (n > 16)
    throw std::invalid_argument(
        "hyperbolicity scan is exponential in the rank; rank <= 16 required");
  const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);

  MoussongReport rep;

  // Classify every generator subset once.
  std::vector<TypeClass> cls(full + 1, TypeClass::Finite);
  std::string affine_name;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const std::vector<int> J = mask_to_subset(mask);
    const ParabolicType t = classify_parabolic(m, J);
    cls[mask] = t.cls;
    // First obstruction: an irreducible affine subset of rank >= 3.
    if (rep.affine_obstruction.empty() && J.size() >= 3 &&
        t.components.size() == 1 && t.cls == TypeClass::Affine) {
      rep.affine_obstruction = J;
      affine_name = t.name();
    }
  }

  // Second obstruction: disjoint commuting infinite subsets.  For a subset
  // J1, the largest candidate partner is the set of generators outside J1
  // commuting with all of J1; a subset spans an infinite group only if that
  // full candidate set does (parabolics of finite groups are finite).
  std::vector<std::uint32_t> comm(static_cast<std::size_t>(n), 0);
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      if (t != s && m.order(s, t) == 2)
        comm[static_cast<std::size_t>(s)] |= 1u << t;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    if (cls[mask] == TypeClass::Finite) continue;
    std::uint32_t cand = full;
    for (int s = 0; s < n; ++s)
      if (mask & (1u << s)) cand &= comm[static_cast<std::size_t>(s)];
    cand &= ~mask;
    if (cand && cls[cand] != TypeClass::Finite) {
      rep.product_obstruction_a = mask_to_subset(mask);
      rep.product_obstruction_b = mask_to_subset(cand);
      break;
    }
  }

  rep.hyperbolic =
      rep.affine_obstruction.empty() && rep.product_obstruction_a.empty();
  if (rep.hyperbolic) {
    rep.summary = "hyperbolic";
  } else {
    rep.summary = "not hyperbolic:";
    if (!rep.affine_obstruction.empty())
      rep.summary += " affine subset " + subset_str(rep.affine_obstruction) +
                     " of type " + affine_name + ";";
    if (!rep.product_obstruction_a.empty())
      rep.summary += " commuting infinite subsets " +
                     subset_str(rep.product_obstruction_a) + " and " +
                     subset_str(rep.product_obstruction_b) + ";";
    rep.summary.pop_back();
  }
  return rep;
}

}  // namespace bldg
