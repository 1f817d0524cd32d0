#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace bldg {

/// Generator letters are small indices into the generating set.
using Letter = std::uint8_t;
using Word = std::vector<Letter>;

/// Base class for failures specific to this library.  Callers that need to
/// distinguish "the computation is impossible" from "the computation was cut
/// off by a configured bound" should catch the derived types.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A query needed data beyond a configured truncation / enumeration bound.
struct TruncationError : Error {
  using Error::Error;
};

/// A bounded search exhausted its horizon without a definite answer.
struct HorizonError : Error {
  using Error::Error;
};

/// A fixed-point iteration hit its hard cap without stabilizing.
struct StabilizationError : Error {
  using Error::Error;
};

/// An input file or instance description is malformed.
struct SpecError : Error {
  using Error::Error;
};

/// Renders a word as dot-separated generator indices ("0.1.0"); the empty
/// word renders as "e".
std::string word_str(const Word& w);

/// Length-then-lexicographic order on words.
bool shortlex_less(const Word& a, const Word& b) noexcept;

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept;
};

/// Symmetric matrix of pairwise orders m(s,t).  Diagonal entries are 1; an
/// off-diagonal entry is either >= 2 or 0, where 0 encodes an infinite order
/// (the same convention used by instance files).
class CoxeterMatrix {
 public:
  CoxeterMatrix(int rank, std::vector<int> entries);

  int rank() const noexcept { return rank_; }
  /// m(s,t); 0 means infinite.
  int order(int s, int t) const;
  /// True when every off-diagonal entry is 2 or infinite.
  bool right_angled() const noexcept;
  bool operator==(const CoxeterMatrix& o) const noexcept {
    return rank_ == o.rank_ && entries_ == o.entries_;
  }

  static CoxeterMatrix dihedral(int m);
  /// Direct product: block diagonal with order 2 across the blocks.
  static CoxeterMatrix product(const CoxeterMatrix& a, const CoxeterMatrix& b);

 private:
  int rank_;
  std::vector<int> entries_;  // rank x rank, row-major
};

class CoxeterSystem;

/// A group element owned by a CoxeterSystem, stored as its ShortLex-least
/// reduced word.  Default-constructed elements belong to no system and may
/// only be compared or assigned.
class GroupElement {
 public:
  GroupElement() = default;

  const Word& word() const noexcept { return word_; }
  int length() const noexcept { return static_cast<int>(word_.size()); }
  bool is_identity() const noexcept { return word_.empty(); }
  const CoxeterSystem* system() const noexcept { return sys_; }

  bool operator==(const GroupElement& o) const noexcept {
    return sys_ == o.sys_ && word_ == o.word_;
  }
  bool operator<(const GroupElement& o) const noexcept {
    return shortlex_less(word_, o.word_);
  }
  std::string str() const { return word_str(word_); }

 private:
  friend class CoxeterSystem;
  GroupElement(const CoxeterSystem* sys, Word w)
      : sys_(sys), word_(std::move(w)) {}
  const CoxeterSystem* sys_ = nullptr;
  Word word_;
};

/// A reflection: an element conjugate to a generator.  Its normal form is an
/// odd palindrome w = p s p^-1 around its middle letter.
struct Reflection {
  GroupElement element;

  bool operator==(const Reflection& o) const noexcept {
    return element == o.element;
  }
  bool operator<(const Reflection& o) const noexcept {
    return element < o.element;
  }
  std::string str() const { return element.str(); }
};

/// Hard bounds that keep every query either exact or loudly rejected.
struct SystemLimits {
  /// Maximal radius of the lazily grown multiplication table (general
  /// backend); words longer than this cannot be normalized.
  int max_table_radius = 72;
  /// Maximal length(a^-1 b) accepted by conv().
  int max_conv_length = 72;
  /// Maximal radius accepted by ball().
  int max_ball_radius = 72;
};

/// A Coxeter system (W, S) with an exact solution to the word problem.
///
/// Two interchangeable backends sit behind normal_form():
///  * right-angled systems (every off-diagonal order 2 or infinite) use
///    syllable shuffling, which works for words of any length;
///  * all other systems use a lazily grown multiplication table built level
///    by level with the exchange condition (parent deduplication walks the
///    finite dihedral residues), bounded by SystemLimits::max_table_radius.
///
/// The class is internally synchronized: const queries may be issued from
/// several threads.
class CoxeterSystem {
 public:
  explicit CoxeterSystem(CoxeterMatrix matrix, SystemLimits limits = {});
  ~CoxeterSystem();
  CoxeterSystem(const CoxeterSystem&) = delete;
  CoxeterSystem& operator=(const CoxeterSystem&) = delete;

  const CoxeterMatrix& matrix() const noexcept { return matrix_; }
  int rank() const noexcept { return matrix_.rank(); }
  const SystemLimits& limits() const noexcept { return limits_; }
  bool right_angled_backend() const noexcept { return right_angled_; }

  GroupElement identity() const;
  GroupElement generator(int s) const;
  /// Normalizes an arbitrary word in the generators.
  GroupElement element(const Word& w) const;
  Word normal_form(const Word& w) const;
  /// Length of the element a word spells, cheaper than a full normal form
  /// on the right-angled backend.
  int word_length(const Word& w) const;

  GroupElement multiply(const GroupElement& a, const GroupElement& b) const;
  /// a * generator(s) and generator(s) * a.
  GroupElement right_mul(const GroupElement& a, int s) const;
  GroupElement left_mul(int s, const GroupElement& a) const;
  GroupElement inverse(const GroupElement& a) const;
  GroupElement conjugate(const GroupElement& g, const GroupElement& x) const;

  /// Left inversion set N(a) = { reflections t : length(t a) < length(a) },
  /// in ShortLex order.  Its size always equals length(a).
  std::vector<Reflection> inversion_set(const GroupElement& a) const;

  /// The reflection w s w^-1.
  Reflection reflection(const GroupElement& w, int s) const;
  /// Validates that e is a reflection (odd palindromic normal form).
  Reflection reflection_from(const GroupElement& e) const;
  bool is_reflection(const GroupElement& e) const;

  /// True when a lies on the far side of t's wall: length(t a) > length(a).
  bool side(const Reflection& t, const GroupElement& a) const;
  bool separates(const Reflection& t, const GroupElement& a,
                 const GroupElement& b) const;

  /// All z with length(a^-1 z) + length(z^-1 b) = length(a^-1 b), ShortLex
  /// order by a^-1 z.  Throws TruncationError past max_conv_length.
  std::vector<GroupElement> conv(const GroupElement& a,
                                 const GroupElement& b) const;

  /// All elements of length <= radius in ShortLex order.  Throws
  /// TruncationError past max_ball_radius.
  std::vector<GroupElement> ball(int radius) const;

  /// Certifies length(u^k) == k * length(u) for k = 1..max_power.  This is a
  /// finite proxy for straightness; max_power defaults to kStraightPower.
  bool is_straight_certificate(const GroupElement& u, int max_power) const;
  static constexpr int kStraightPower = 6;

 private:
  struct Table;
  void check_same(const GroupElement& a) const;
  Word nf_internal(const Word& w) const;

  CoxeterMatrix matrix_;
  SystemLimits limits_;
  bool right_angled_;
  mutable std::mutex mu_;
  std::unique_ptr<Table> table_;  // null for the right-angled backend
};

}  // namespace bldg
