#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "odx/rational.hpp"

namespace odx {

// An s1 x ... x sn factorial layout. Level 0 of each factor is the baseline.
class FactorLayout {
public:
  FactorLayout() = default;
  explicit FactorLayout(std::vector<int> levels);

  // Parses "2x2x3" (case-insensitive separator 'x').
  static FactorLayout parse(const std::string& s);

  int factors() const { return static_cast<int>(levels_.size()); }
  int level_count(int j) const { return levels_[j]; }
  const std::vector<int>& levels() const { return levels_; }
  int treatment_count() const { return v_; }

  friend bool operator==(const FactorLayout& a, const FactorLayout& b) {
    return a.levels_ == b.levels_;
  }
  friend bool operator!=(const FactorLayout& a, const FactorLayout& b) { return !(a == b); }

  std::string str() const;

private:
  std::vector<int> levels_;
  int v_ = 0;
};

// A treatment combination i1...in, one level per factor.
using Treatment = std::vector<int>;

bool treatment_valid(const FactorLayout& layout, const Treatment& t);

// Lexicographic rank of a treatment among all treatments of the layout.
int treatment_index(const FactorLayout& layout, const Treatment& t);
Treatment treatment_from_index(const FactorLayout& layout, int index);

// Digits concatenated, e.g. "012". Levels above 9 are not used at desk scale.
std::string treatment_str(const Treatment& t);
Treatment treatment_parse(const FactorLayout& layout, const std::string& s);

// All v treatments in lexicographic order of their index tuples.
std::vector<Treatment> enumerate_treatments(const FactorLayout& layout);

// A factorial effect is indexed by a nonzero treatment tuple; its order u is
// the number of nonzero components (u = 1 for main effects).
class EffectIndex {
public:
  EffectIndex(const FactorLayout& layout, Treatment index);

  const Treatment& index() const { return index_; }
  int order() const { return order_; }
  std::string str() const { return treatment_str(index_); }

  friend bool operator==(const EffectIndex& a, const EffectIndex& b) {
    return a.index_ == b.index_;
  }
  friend bool operator<(const EffectIndex& a, const EffectIndex& b) {
    return a.index_ < b.index_;
  }

private:
  Treatment index_;
  int order_;
};

// The v-1 effects in lexicographic order of their index tuples.
std::vector<EffectIndex> all_effects(const FactorLayout& layout);

// A linear form in the treatment effects with coefficients summing to zero,
// stored densely in lexicographic treatment order.
struct ContrastVector {
  FactorLayout layout;
  std::vector<Rational> coef;  // size v

  const Rational& at(const Treatment& t) const { return coef[treatment_index(layout, t)]; }
  bool sums_to_zero() const;
};

// theta_{i} as a contrast of the taus: sum over subsets S of the nonzero
// positions of i of (-1)^{u-|S|} tau_{i with positions outside S zeroed}.
ContrastVector baseline_contrast(const FactorLayout& layout, const EffectIndex& effect);

// theta*_{i} of the 2x2 orthogonal parametrization: coefficients +-1/2 by the
// product of the signs (+ for level 1, - for level 0) over the effect's
// nonzero positions.
ContrastVector orthogonal_contrast_2x2(const FactorLayout& layout, const EffectIndex& effect);

// One two-channel slide comparing red against green.
struct Slide {
  Treatment red;
  Treatment green;

  friend bool operator==(const Slide& a, const Slide& b) {
    return a.red == b.red && a.green == b.green;
  }
  friend bool operator<(const Slide& a, const Slide& b) {
    return a.red != b.red ? a.red < b.red : a.green < b.green;
  }
  std::string str() const { return "(" + treatment_str(red) + "," + treatment_str(green) + ")"; }
};

// A multiset of slides over one layout.
struct Design {
  FactorLayout layout;
  std::vector<Slide> slides;

  int size() const { return static_cast<int>(slides.size()); }
  std::string str() const;
};

void validate_design(const Design& d);

// Deterministic canonical form. With dye_sensitive=false each slide is first
// reordered so its treatments are in lexicographic order; the slide list is
// then sorted. Canonical forms are equal iff the designs are equal as
// multisets (up to within-slide order when dye_sensitive=false).
Design canonicalize(const Design& d, bool dye_sensitive = false);

bool designs_equal(const Design& a, const Design& b, bool dye_sensitive = false);

// The six 2x2 slide kinds in the fixed order
// (01,00),(10,00),(11,00),(10,01),(11,01),(11,10).
std::vector<Slide> slide_kinds_2x2();

// Frequency vector f1..f6 of a 2x2 design over slide_kinds_2x2 (dye order
// ignored). Throws if the layout is not 2x2.
std::vector<int> frequency_vector_2x2(const Design& d);
Design design_from_frequency_2x2(const std::vector<int>& f);

}  // namespace odx
