#pragma once

#include <cstdint>
#include <vector>

#include "bldg/coxeter.hpp"

namespace bldg {

/// An independent word-problem reference built on the integer geometric
/// representation: each generator acts on the root basis by
/// sigma_s(alpha_t) = alpha_t + c(s,t) alpha_s with c = 2 cos(pi / m(s,t)).
/// The coefficients are integers exactly when every pairwise order lies in
/// {2, 3, infinity}; for those systems the representation is faithful, so
/// exact matrix equality decides group equality with no reference to any
/// word rewriting.
bool oracle_supported(const CoxeterMatrix& m);

/// ShortLex normal forms of every element of length <= radius, in ShortLex
/// order, computed by breadth-first search with matrix deduplication.
/// Throws std::invalid_argument when the matrix is unsupported.  Runtime and
/// matrix entries grow exponentially with the radius; intended for small
/// truncations only.
std::vector<Word> oracle_ball(const CoxeterMatrix& m, int radius);

/// ShortLex normal form of an arbitrary word, same method.
Word oracle_normal_form(const CoxeterMatrix& m, const Word& w);

}  // namespace bldg
