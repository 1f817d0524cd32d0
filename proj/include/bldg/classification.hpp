#pragma once

#include <string>
#include <vector>

#include "bldg/coxeter.hpp"

namespace bldg {

/// Growth class of a Coxeter group, decided from its diagram.
enum class TypeClass { Finite, Affine, Indefinite };

std::string type_class_str(TypeClass c);

/// One connected component of a diagram, with its matched family name
/// ("A3", "I2(7)", "B~3", "indefinite", ...).
struct ComponentType {
  TypeClass cls = TypeClass::Finite;
  std::string name;
  std::vector<int> vertices;  // generator indices, ascending
};

/// Classification of a standard parabolic subgroup W_J.
///
/// The overall class is Finite when every component is finite (in particular
/// when J is empty), Affine when J is nonempty and every component is
/// irreducible affine, and Indefinite otherwise.  With this convention the
/// hyperbolicity obstructions below are exactly the classical ones: a group
/// with both an affine and a finite factor is flagged through its affine
/// component, not through the overall class.
struct ParabolicType {
  TypeClass cls = TypeClass::Finite;
  std::vector<ComponentType> components;
  /// "A2 x B~3", or "trivial" for the empty subset.
  std::string name() const;
};

/// Restriction of a Coxeter matrix to the generators in J (ascending order,
/// duplicates rejected).  The result indexes generators by position in J.
CoxeterMatrix restrict_matrix(const CoxeterMatrix& m,
                              const std::vector<int>& J);

/// Classifies the standard parabolic on the generator subset J.
ParabolicType classify_parabolic(const CoxeterMatrix& m,
                                 const std::vector<int>& J);

/// Classifies the full group.
ParabolicType classify_group(const CoxeterMatrix& m);

/// Outcome of the word-hyperbolicity test for a Coxeter group: the group is
/// hyperbolic iff no generator subset spans an irreducible affine diagram of
/// rank >= 3 and no two disjoint, fully commuting generator subsets both
/// span infinite groups.
struct MoussongReport {
  bool hyperbolic = true;
  /// When not hyperbolic for the first reason: an irreducible affine subset
  /// of size >= 3.  Empty otherwise.
  std::vector<int> affine_obstruction;
  /// When not hyperbolic for the second reason: two disjoint commuting
  /// subsets spanning infinite groups.  Empty otherwise.
  std::vector<int> product_obstruction_a;
  std::vector<int> product_obstruction_b;
  /// One-line human-readable verdict.
  std::string summary;
};

/// Decides hyperbolicity by exhaustive subset inspection.  Ranks above 16
/// are rejected (the scan is exponential in the rank).
MoussongReport is_hyperbolic(const CoxeterMatrix& m);

}  // namespace bldg
