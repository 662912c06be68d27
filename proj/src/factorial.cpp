#include "odx/factorial.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace odx {

FactorLayout::FactorLayout(std::vector<int> levels) : levels_(std::move(levels)) {
  if (levels_.empty()) throw std::invalid_argument("layout needs at least one factor");
  long long v = 1;
  for (int s : levels_) {
    if (s < 2) throw std::invalid_argument("every factor needs at least 2 levels");
    v *= s;
    if (v > 1'000'000) throw std::invalid_argument("layout too large");
  }
  v_ = static_cast<int>(v);
}

FactorLayout FactorLayout::parse(const std::string& s) {
  if (!s.empty() && s.back() == 'x') throw std::invalid_argument("bad layout string: " + s);
  std::vector<int> levels;
  std::string tok;
  std::stringstream ss(s);
  while (std::getline(ss, tok, 'x')) {
    if (tok.empty()) throw std::invalid_argument("bad layout string: " + s);
    std::size_t pos = 0;
    int lvl = 0;
    try {
      lvl = std::stoi(tok, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad layout string: " + s);
    }
    if (pos != tok.size()) throw std::invalid_argument("bad layout string: " + s);
    levels.push_back(lvl);
  }
  if (levels.empty()) throw std::invalid_argument("bad layout string: " + s);
  return FactorLayout(levels);
}

std::string FactorLayout::str() const {
  std::string out;
  for (std::size_t j = 0; j < levels_.size(); ++j) {
    if (j) out += "x";
    out += std::to_string(levels_[j]);
  }
  return out;
}

bool treatment_valid(const FactorLayout& layout, const Treatment& t) {
  if (static_cast<int>(t.size()) != layout.factors()) return false;
  for (int j = 0; j < layout.factors(); ++j)
    if (t[j] < 0 || t[j] >= layout.level_count(j)) return false;
  return true;
}

int treatment_index(const FactorLayout& layout, const Treatment& t) {
  int idx = 0;
  for (int j = 0; j < layout.factors(); ++j) idx = idx * layout.level_count(j) + t[j];
  return idx;
}

Treatment treatment_from_index(const FactorLayout& layout, int index) {
  Treatment t(layout.factors());
  for (int j = layout.factors() - 1; j >= 0; --j) {
    t[j] = index % layout.level_count(j);
    index /= layout.level_count(j);
  }
  return t;
}

std::string treatment_str(const Treatment& t) {
  std::string out;
  for (int i : t) out += std::to_string(i);
  return out;
}

Treatment treatment_parse(const FactorLayout& layout, const std::string& s) {
  if (static_cast<int>(s.size()) != layout.factors())
    throw std::invalid_argument("treatment '" + s + "' does not match layout " + layout.str());
  Treatment t(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (s[j] < '0' || s[j] > '9')
      throw std::invalid_argument("bad treatment string: " + s);
    t[j] = s[j] - '0';
  }
  if (!treatment_valid(layout, t))
    throw std::invalid_argument("treatment '" + s + "' out of bounds for layout " + layout.str());
  return t;
}

std::vector<Treatment> enumerate_treatments(const FactorLayout& layout) {
  std::vector<Treatment> out;
  out.reserve(layout.treatment_count());
  for (int i = 0; i < layout.treatment_count(); ++i) out.push_back(treatment_from_index(layout, i));
  return out;
}

EffectIndex::EffectIndex(const FactorLayout& layout, Treatment index) : index_(std::move(index)) {
  if (!treatment_valid(layout, index_)) throw std::invalid_argument("effect index out of bounds");
  order_ = 0;
  for (int i : index_) order_ += i != 0;
  if (order_ == 0) throw std::invalid_argument("effect index must have a nonzero component");
}

std::vector<EffectIndex> all_effects(const FactorLayout& layout) {
  std::vector<EffectIndex> out;
  for (const Treatment& t : enumerate_treatments(layout)) {
    if (std::all_of(t.begin(), t.end(), [](int i) { return i == 0; })) continue;
    out.emplace_back(layout, t);
  }
  return out;
}

bool ContrastVector::sums_to_zero() const {
  Rational s;
  for (const Rational& q : coef) s += q;
  return s.is_zero();
}

ContrastVector baseline_contrast(const FactorLayout& layout, const EffectIndex& effect) {
  ContrastVector c{layout, std::vector<Rational>(layout.treatment_count())};
  std::vector<int> nz;
  for (int j = 0; j < layout.factors(); ++j)
    if (effect.index()[j] != 0) nz.push_back(j);
  const int u = static_cast<int>(nz.size());
  for (int mask = 0; mask < (1 << u); ++mask) {
    Treatment t(layout.factors(), 0);
    int kept = 0;
    for (int b = 0; b < u; ++b)
      if (mask & (1 << b)) {
        t[nz[b]] = effect.index()[nz[b]];
        ++kept;
      }
    const int sgn = ((u - kept) % 2 == 0) ? 1 : -1;
    c.coef[treatment_index(layout, t)] += Rational(sgn);
  }
  return c;
}

ContrastVector orthogonal_contrast_2x2(const FactorLayout& layout, const EffectIndex& effect) {
  if (layout.levels() != std::vector<int>{2, 2})
    throw std::invalid_argument("orthogonal parametrization implemented for 2x2 only");
  ContrastVector c{layout, std::vector<Rational>(4)};
  for (const Treatment& t : enumerate_treatments(layout)) {
    int sgn = 1;
    for (int j = 0; j < 2; ++j)
      if (effect.index()[j] != 0) sgn *= t[j] == 1 ? 1 : -1;
    c.coef[treatment_index(layout, t)] = Rational(sgn, 2);
  }
  return c;
}

std::string Design::str() const {
  std::string out = "{";
  for (std::size_t i = 0; i < slides.size(); ++i) {
    if (i) out += ",";
    out += slides[i].str();
  }
  return out + "}";
}

void validate_design(const Design& d) {
  if (d.slides.empty()) throw std::invalid_argument("design needs at least one slide");
  for (const Slide& s : d.slides) {
    if (!treatment_valid(d.layout, s.red) || !treatment_valid(d.layout, s.green))
      throw std::invalid_argument("slide treatment out of bounds for layout " + d.layout.str());
    if (s.red == s.green)
      throw std::invalid_argument("slide compares a treatment with itself");
  }
}

Design canonicalize(const Design& d, bool dye_sensitive) {
  Design out = d;
  if (!dye_sensitive)
    for (Slide& s : out.slides)
      if (s.green < s.red) std::swap(s.red, s.green);
  std::sort(out.slides.begin(), out.slides.end());
  return out;
}

bool designs_equal(const Design& a, const Design& b, bool dye_sensitive) {
  if (a.layout != b.layout) return false;
  return canonicalize(a, dye_sensitive).slides == canonicalize(b, dye_sensitive).slides;
}

std::vector<Slide> slide_kinds_2x2() {
  auto s = [](int r1, int r2, int g1, int g2) { return Slide{{r1, r2}, {g1, g2}}; };
  return {s(0, 1, 0, 0), s(1, 0, 0, 0), s(1, 1, 0, 0),
          s(1, 0, 0, 1), s(1, 1, 0, 1), s(1, 1, 1, 0)};
}

std::vector<int> frequency_vector_2x2(const Design& d) {
  if (d.layout.levels() != std::vector<int>{2, 2})
    throw std::invalid_argument("frequency vector is defined for the 2x2 layout");
  const auto kinds = slide_kinds_2x2();
  std::vector<int> f(6, 0);
  for (const Slide& s : d.slides) {
    bool found = false;
    for (std::size_t k = 0; k < kinds.size(); ++k) {
      const bool same = s.red == kinds[k].red && s.green == kinds[k].green;
      const bool swapped = s.red == kinds[k].green && s.green == kinds[k].red;
      if (same || swapped) {
        ++f[k];
        found = true;
        break;
      }
    }
    if (!found) throw std::invalid_argument("slide not on the 2x2 layout");
  }
  return f;
}

Design design_from_frequency_2x2(const std::vector<int>& f) {
  if (f.size() != 6) throw std::invalid_argument("frequency vector needs 6 entries");
  Design d{FactorLayout({2, 2}), {}};
  const auto kinds = slide_kinds_2x2();
  for (std::size_t k = 0; k < 6; ++k) {
    if (f[k] < 0) throw std::invalid_argument("negative slide frequency");
    for (int i = 0; i < f[k]; ++i) d.slides.push_back(kinds[k]);
  }
  validate_design(d);
  return d;
}

}  // namespace odx
