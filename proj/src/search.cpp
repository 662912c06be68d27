#include "odx/search.hpp"

#include "odx/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace odx {

namespace {

long long binom(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > static_cast<__int128>(4e18)) throw std::overflow_error("search space too large");
  }
  return static_cast<long long>(r);
}

// Candidate indices of a multiset in non-decreasing order; the successor in
// lexicographic order advances the rightmost position that still can.
bool next_combo(std::vector<int>& combo, int k_candidates) {
  int i = static_cast<int>(combo.size()) - 1;
  while (i >= 0 && combo[i] == k_candidates - 1) --i;
  if (i < 0) return false;
  ++combo[i];
  for (std::size_t j = i + 1; j < combo.size(); ++j) combo[j] = combo[i];
  return true;
}

std::vector<int> unrank_combo(long long rank, int k_candidates, int n) {
  std::vector<int> combo(n);
  int c = 0;
  for (int pos = 0; pos < n; ++pos) {
    while (true) {
      const long long cnt = binom(k_candidates - c + n - pos - 2, n - pos - 1);
      if (rank < cnt) break;
      rank -= cnt;
      ++c;
    }
    combo[pos] = c;
  }
  return combo;
}

// Shared per-search state: candidate slides mapped to integer rows in the
// reduced coordinates (factorial effects, then the dye block).
struct EvalContext {
  FactorLayout layout;
  ModelSpec model;
  std::vector<Slide> candidates;
  int p = 0;
  int n_theta = 0;
  bool int_kernel = false;
  std::vector<std::vector<int>> rows;
  std::vector<Rational> inv_weight;  // per candidate, inverse variance
};

EvalContext make_context(const FactorLayout& layout, const ModelSpec& model,
                         std::vector<Slide> candidates, int n_slides) {
  EvalContext ctx;
  ctx.layout = layout;
  ctx.model = model;
  ctx.candidates = std::move(candidates);
  const int v = layout.treatment_count();
  ctx.n_theta = v - 1;
  ctx.p = ctx.n_theta + (model.dye == Dye::General ? v : model.dye == Dye::Reduced ? 1 : 0);

  const auto codes = theta_codes(layout);
  for (const Slide& s : ctx.candidates) {
    const int r = treatment_index(layout, s.red);
    const int g = treatment_index(layout, s.green);
    std::vector<int> row = theta_slide_row(codes, r, g);
    if (model.dye == Dye::Reduced) {
      row.push_back(1);
    } else if (model.dye == Dye::General) {
      row.resize(ctx.p, 0);
      row[ctx.n_theta + r] += 1;
      row[ctx.n_theta + g] += 1;
    }
    ctx.rows.push_back(std::move(row));
    if (model.hetero.empty())
      ctx.inv_weight.push_back(Rational(1));
    else
      ctx.inv_weight.push_back((model.hetero[r] + model.hetero[g] + Rational(1)).inverse());
  }

  // The integer determinant kernel needs a nonsingular information matrix to
  // mean full estimability (true without the per-treatment dye block) and
  // minors that fit in 64 bits; entries are bounded by the slide count.
  const double hadamard = std::pow(n_slides * std::sqrt(double(ctx.p)), ctx.p);
  ctx.int_kernel = model.homoscedastic() && model.dye != Dye::General && hadamard < 2e9;
  return ctx;
}

long long bareiss_det(std::vector<long long>& a, int n) {
  if (n == 0) return 1;
  long long prev = 1;
  int sign = 1;
  for (int k = 0; k + 1 < n; ++k) {
    if (a[static_cast<std::size_t>(k) * n + k] == 0) {
      int piv = -1;
      for (int i = k + 1; i < n; ++i)
        if (a[static_cast<std::size_t>(i) * n + k] != 0) {
          piv = i;
          break;
        }
      if (piv == -1) return 0;
      for (int j = 0; j < n; ++j)
        std::swap(a[static_cast<std::size_t>(k) * n + j], a[static_cast<std::size_t>(piv) * n + j]);
      sign = -sign;
    }
    const long long pivot = a[static_cast<std::size_t>(k) * n + k];
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        long long& x = a[static_cast<std::size_t>(i) * n + j];
        x = (x * pivot - a[static_cast<std::size_t>(i) * n + k] *
                             a[static_cast<std::size_t>(k) * n + j]) /
            prev;
      }
      a[static_cast<std::size_t>(i) * n + k] = 0;
    }
    prev = pivot;
  }
  return sign * a[static_cast<std::size_t>(n - 1) * n + (n - 1)];
}

// Incremental information matrices over the enumeration prefix, evaluated at
// the leaf by exact integer determinant ratios: Var(theta_e) is the (e,e)
// principal minor over the determinant.
class IntKernel {
public:
  IntKernel(const EvalContext& ctx, int n)
      : ctx_(ctx), p_(ctx.p), pp_(ctx.p * ctx.p), n_(n),
        stack_(static_cast<std::size_t>(n + 1) * pp_, 0) {}

  void place(int depth, int cand) {
    const long long* src = &stack_[static_cast<std::size_t>(depth) * pp_];
    long long* dst = &stack_[static_cast<std::size_t>(depth + 1) * pp_];
    const std::vector<int>& r = ctx_.rows[cand];
    for (int i = 0; i < p_; ++i)
      for (int j = 0; j < p_; ++j)
        dst[i * p_ + j] = src[i * p_ + j] + static_cast<long long>(r[i]) * r[j];
  }

  bool eval(std::vector<Rational>& vars) {
    const long long* m = &stack_[static_cast<std::size_t>(n_) * pp_];
    scratch_.assign(m, m + pp_);
    const long long det = bareiss_det(scratch_, p_);
    if (det == 0) return false;
    for (int e = 0; e < ctx_.n_theta; ++e) {
      scratch_.clear();
      for (int i = 0; i < p_; ++i) {
        if (i == e) continue;
        for (int j = 0; j < p_; ++j)
          if (j != e) scratch_.push_back(m[i * p_ + j]);
      }
      vars[e] = Rational::of(bareiss_det(scratch_, p_ - 1), det);
    }
    return true;
  }

private:
  const EvalContext& ctx_;
  int p_;
  int pp_;
  int n_;
  std::vector<long long> stack_;
  std::vector<long long> scratch_;
};

// Rational fallback for heteroscedastic noise or the per-treatment dye block,
// whose information matrix is singular and needs a generalized inverse.
class RatKernel {
public:
  RatKernel(const EvalContext& ctx, int n)
      : ctx_(ctx), p_(ctx.p), n_(n), stack_(n + 1, RatMat(ctx.p, ctx.p)) {}

  void place(int depth, int cand) {
    RatMat& dst = stack_[depth + 1];
    dst = stack_[depth];
    const std::vector<int>& r = ctx_.rows[cand];
    const Rational& w = ctx_.inv_weight[cand];
    for (int i = 0; i < p_; ++i) {
      if (r[i] == 0) continue;
      const Rational wi = w * Rational(r[i]);
      for (int j = 0; j < p_; ++j)
        if (r[j] != 0) dst.at(i, j) += wi * Rational(r[j]);
    }
  }

  bool eval(std::vector<Rational>& vars) {
    SymPsdSolver solver(stack_[n_]);
    RatVec unit(p_);
    for (int e = 0; e < ctx_.n_theta; ++e) {
      unit[e] = Rational(1);
      auto q = solver.quad_form(unit);
      unit[e] = Rational(0);
      if (!q) return false;
      vars[e] = *q;
    }
    return true;
  }

private:
  const EvalContext& ctx_;
  int p_;
  int n_;
  std::vector<RatMat> stack_;
};

struct ChunkBest {
  bool found = false;
  Rational value;
  std::vector<int> combo;
  long long count = 0;
  std::vector<std::vector<int>> optima;
};

template <class Kernel>
void scan_range(const EvalContext& ctx, int n, long long lo, long long hi,
                const std::vector<std::vector<Rational>>& weight_sets, bool collect,
                std::vector<ChunkBest>& best) {
  const int k = static_cast<int>(ctx.candidates.size());
  std::vector<int> combo = unrank_combo(lo, k, n);
  Kernel kernel(ctx, n);
  for (int d = 0; d < n; ++d) kernel.place(d, combo[d]);
  std::vector<Rational> vars(ctx.n_theta);
  for (long long rank = lo; rank < hi; ++rank) {
    if (rank != lo) {
      int i = n - 1;
      while (combo[i] == k - 1) --i;
      ++combo[i];
      for (int j = i + 1; j < n; ++j) combo[j] = combo[i];
      for (int d = i; d < n; ++d) kernel.place(d, combo[d]);
    }
    if (!kernel.eval(vars)) continue;
    for (std::size_t ws = 0; ws < weight_sets.size(); ++ws) {
      Rational value;
      for (int e = 0; e < ctx.n_theta; ++e)
        if (!weight_sets[ws][e].is_zero()) value += weight_sets[ws][e] * vars[e];
      ChunkBest& b = best[ws];
      if (!b.found || value < b.value) {
        b.found = true;
        b.value = value;
        b.combo = combo;
        b.count = 1;
        if (collect) b.optima.assign(1, combo);
      } else if (value == b.value) {
        ++b.count;
        if (collect) b.optima.push_back(combo);
      }
    }
  }
}

Design design_from_combo(const EvalContext& ctx, const std::vector<int>& combo) {
  Design d{ctx.layout, {}};
  for (int c : combo) d.slides.push_back(ctx.candidates[c]);
  return d;
}

// Variances of every factorial effect through the generic model path, or
// nullopt when some effect is not estimable.
std::optional<std::vector<Rational>> all_theta_variances(const Design& d, const ModelSpec& m) {
  SymPsdSolver solver(information_matrix(d, m));
  std::vector<Rational> vars;
  for (const EffectIndex& e : all_effects(d.layout)) {
    auto q = solver.quad_form(pad_contrast(baseline_contrast(d.layout, e), m));
    if (!q) return std::nullopt;
    vars.push_back(*q);
  }
  return vars;
}

std::vector<Slide> normalize_candidates(const FactorLayout& layout, const ModelSpec& m,
                                        std::vector<Slide> slides) {
  const bool dyed = m.dye != Dye::None;
  for (Slide& s : slides) {
    if (!treatment_valid(layout, s.red) || !treatment_valid(layout, s.green) ||
        s.red == s.green)
      throw std::invalid_argument("invalid candidate slide " + s.str());
    if (!dyed && s.green < s.red) std::swap(s.red, s.green);
  }
  std::sort(slides.begin(), slides.end());
  slides.erase(std::unique(slides.begin(), slides.end()), slides.end());
  if (slides.empty()) throw std::invalid_argument("empty candidate slide set");
  return slides;
}

std::vector<std::vector<Rational>> weight_tables(const FactorLayout& layout,
                                                 const std::vector<CriterionWeights>& ws) {
  std::vector<std::vector<Rational>> tables;
  for (const CriterionWeights& w : ws) {
    validate_weights(w);
    if (w.layout != layout) throw std::invalid_argument("weight layout mismatch");
    tables.push_back(w.weight);
  }
  return tables;
}

}  // namespace

CriterionWeights CriterionWeights::two_factor(const FactorLayout& layout, const Rational& w) {
  CriterionWeights cw{layout, {}};
  for (const EffectIndex& e : all_effects(layout))
    cw.weight.push_back(e.order() >= 2 ? w : Rational(1));
  return cw;
}

void validate_weights(const CriterionWeights& w) {
  if (static_cast<int>(w.weight.size()) != w.layout.treatment_count() - 1)
    throw std::invalid_argument("weight list must cover every factorial effect");
  bool positive = false;
  for (const Rational& q : w.weight) {
    if (q.sign() < 0) throw std::invalid_argument("criterion weights must be nonnegative");
    if (q.sign() > 0) positive = true;
  }
  if (!positive) throw std::invalid_argument("criterion needs at least one positive weight");
}

Rational criterion_value(const Design& d, const ModelSpec& m, const CriterionWeights& w) {
  validate_weights(w);
  if (w.layout != d.layout) throw std::invalid_argument("weight layout mismatch");
  validate_model(d, m);
  SymPsdSolver solver(information_matrix(d, m));
  Rational value;
  const auto effects = all_effects(d.layout);
  for (std::size_t e = 0; e < effects.size(); ++e) {
    if (w.weight[e].is_zero()) continue;
    auto q = solver.quad_form(pad_contrast(baseline_contrast(d.layout, effects[e]), m));
    if (!q)
      throw NotEstimable("design cannot estimate effect " + effects[e].str(),
                         {effects[e].str()});
    value += w.weight[e] * *q;
  }
  return value;
}

std::vector<Slide> candidate_slides(const FactorLayout& layout, const ModelSpec& m) {
  std::vector<Slide> out;
  const auto treatments = enumerate_treatments(layout);
  const bool dyed = m.dye != Dye::None;
  for (std::size_t i = 0; i < treatments.size(); ++i)
    for (std::size_t j = 0; j < treatments.size(); ++j) {
      if (i == j) continue;
      if (!dyed && j < i) continue;
      out.push_back({treatments[i], treatments[j]});
    }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<SearchResult> exhaustive_w_optimal_batch(const FactorLayout& layout, int n_slides,
                                                     const ModelSpec& m,
                                                     const std::vector<CriterionWeights>& ws,
                                                     const SearchOptions& opts) {
  if (n_slides < 1) throw std::invalid_argument("need at least one slide");
  if (m.replication)
    throw std::invalid_argument("exhaustive search does not take a replication plan");
  if (ws.empty()) throw std::invalid_argument("no criterion given");
  const auto tables = weight_tables(layout, ws);

  std::vector<Slide> cands = opts.restrict_to.empty()
                                 ? candidate_slides(layout, m)
                                 : normalize_candidates(layout, m, opts.restrict_to);
  const EvalContext ctx = make_context(layout, m, std::move(cands), n_slides);
  const int k = static_cast<int>(ctx.candidates.size());
  const long long total = binom(k + n_slides - 1, n_slides);

  const int jobs = std::max(1, opts.jobs);
  std::vector<std::vector<ChunkBest>> chunk(jobs, std::vector<ChunkBest>(ws.size()));

  if (opts.reference_kernel) {
    // Serial cross-check: every candidate design evaluated independently
    // through the public model interface.
    std::vector<int> combo(n_slides, 0);
    std::vector<ChunkBest>& best = chunk[0];
    for (long long rank = 0; rank < total; ++rank) {
      if (rank != 0) next_combo(combo, k);
      const Design d = design_from_combo(ctx, combo);
      const auto vars = all_theta_variances(d, m);
      if (!vars) continue;
      for (std::size_t ws_i = 0; ws_i < tables.size(); ++ws_i) {
        Rational value;
        for (int e = 0; e < ctx.n_theta; ++e)
          if (!tables[ws_i][e].is_zero()) value += tables[ws_i][e] * (*vars)[e];
        ChunkBest& b = best[ws_i];
        if (!b.found || value < b.value) {
          b = {true, value, combo, 1, {}};
          if (opts.collect_optima) b.optima.assign(1, combo);
        } else if (value == b.value) {
          ++b.count;
          if (opts.collect_optima) b.optima.push_back(combo);
        }
      }
    }
  } else {
#pragma omp parallel for schedule(static) num_threads(jobs)
    for (int c = 0; c < jobs; ++c) {
      const long long lo = static_cast<long long>(static_cast<__int128>(total) * c / jobs);
      const long long hi = static_cast<long long>(static_cast<__int128>(total) * (c + 1) / jobs);
      if (lo >= hi) continue;
      if (ctx.int_kernel)
        scan_range<IntKernel>(ctx, n_slides, lo, hi, tables, opts.collect_optima, chunk[c]);
      else
        scan_range<RatKernel>(ctx, n_slides, lo, hi, tables, opts.collect_optima, chunk[c]);
    }
  }

  // Chunks cover ordered ranges, so merging in chunk order keeps the first
  // (lexicographically least) optimum and exact tie counts for any job count.
  std::vector<SearchResult> results;
  for (std::size_t ws_i = 0; ws_i < ws.size(); ++ws_i) {
    const ChunkBest* best = nullptr;
    for (int c = 0; c < jobs; ++c) {
      const ChunkBest& b = chunk[c][ws_i];
      if (!b.found) continue;
      if (!best || b.value < best->value) best = &b;
    }
    if (!best) throw NotEstimable("no design in the search space keeps every effect estimable");
    SearchResult r;
    r.criterion = best->value;
    r.design = design_from_combo(ctx, best->combo);
    for (int c = 0; c < jobs; ++c) {
      const ChunkBest& b = chunk[c][ws_i];
      if (!b.found || b.value != best->value) continue;
      r.optima_count += b.count;
      if (opts.collect_optima)
        for (const auto& combo : b.optima) r.optima.push_back(design_from_combo(ctx, combo));
    }
    results.push_back(std::move(r));
  }
  return results;
}

SearchResult exhaustive_w_optimal(const FactorLayout& layout, int n_slides, const ModelSpec& m,
                                  const CriterionWeights& w, const SearchOptions& opts) {
  return exhaustive_w_optimal_batch(layout, n_slides, m, {w}, opts)[0];
}

std::vector<Design> pareto_admissible(const FactorLayout& layout, int n_slides,
                                      const ModelSpec& m, const SearchOptions& opts) {
  if (n_slides < 1) throw std::invalid_argument("need at least one slide");
  if (m.replication)
    throw std::invalid_argument("admissibility search does not take a replication plan");
  std::vector<Slide> cands = opts.restrict_to.empty()
                                 ? candidate_slides(layout, m)
                                 : normalize_candidates(layout, m, opts.restrict_to);
  const EvalContext ctx = make_context(layout, m, std::move(cands), n_slides);
  const int k = static_cast<int>(ctx.candidates.size());
  const long long total = binom(k + n_slides - 1, n_slides);

  // Designs sharing a variance vector stand or fall together, so group
  // before the quadratic dominance filter.
  std::map<std::vector<Rational>, std::vector<std::vector<int>>> groups;
  std::vector<int> combo(n_slides, 0);
  IntKernel ik(ctx, n_slides);
  RatKernel rk(ctx, n_slides);
  for (int d = 0; d < n_slides; ++d) {
    ik.place(d, 0);
    rk.place(d, 0);
  }
  std::vector<Rational> vars(ctx.n_theta);
  for (long long rank = 0; rank < total; ++rank) {
    if (rank != 0) {
      int i = n_slides - 1;
      while (combo[i] == k - 1) --i;
      ++combo[i];
      for (int j = i + 1; j < n_slides; ++j) combo[j] = combo[i];
      for (int d = i; d < n_slides; ++d) {
        if (ctx.int_kernel)
          ik.place(d, combo[d]);
        else
          rk.place(d, combo[d]);
      }
    }
    const bool ok = ctx.int_kernel ? ik.eval(vars) : rk.eval(vars);
    if (ok) groups[vars].push_back(combo);
  }

  std::vector<const std::vector<Rational>*> keys;
  for (const auto& [key, members] : groups) keys.push_back(&key);
  std::vector<Design> out;
  for (std::size_t a = 0; a < keys.size(); ++a) {
    bool dominated = false;
    for (std::size_t b = 0; b < keys.size() && !dominated; ++b) {
      if (a == b) continue;
      bool all_le = true, one_lt = false;
      for (int e = 0; e < ctx.n_theta; ++e) {
        if ((*keys[b])[e] > (*keys[a])[e]) {
          all_le = false;
          break;
        }
        if ((*keys[b])[e] < (*keys[a])[e]) one_lt = true;
      }
      dominated = all_le && one_lt;
    }
    if (!dominated)
      for (const auto& c : groups.at(*keys[a])) out.push_back(design_from_combo(ctx, c));
  }
  std::sort(out.begin(), out.end(),
            [](const Design& x, const Design& y) { return x.slides < y.slides; });
  return out;
}

std::vector<Design> pareto_admissible_among(const std::vector<Design>& candidates,
                                            const ModelSpec& m) {
  std::map<std::string, Design> pool;
  for (const Design& d : candidates) {
    validate_model(d, m);
    Design canon = canonicalize(d, m.dye != Dye::None);
    pool.emplace(canon.str(), std::move(canon));
  }
  std::vector<Design> designs;
  std::vector<std::vector<Rational>> vectors;
  for (auto& [key, d] : pool) {
    auto vars = all_theta_variances(d, m);
    if (!vars) continue;
    designs.push_back(d);
    vectors.push_back(std::move(*vars));
  }
  std::vector<Design> out;
  for (std::size_t a = 0; a < designs.size(); ++a) {
    bool dominated = false;
    for (std::size_t b = 0; b < designs.size() && !dominated; ++b) {
      if (a == b) continue;
      bool all_le = true, one_lt = false;
      for (std::size_t e = 0; e < vectors[a].size(); ++e) {
        if (vectors[b][e] > vectors[a][e]) {
          all_le = false;
          break;
        }
        if (vectors[b][e] < vectors[a][e]) one_lt = true;
      }
      dominated = all_le && one_lt;
    }
    if (!dominated) out.push_back(designs[a]);
  }
  std::sort(out.begin(), out.end(),
            [](const Design& x, const Design& y) { return x.slides < y.slides; });
  return out;
}

SearchResult augment_optimal(const FactorLayout& layout, int n_slides, const ModelSpec& m,
                             const CriterionWeights& w) {
  validate_weights(w);
  if (w.layout != layout) throw std::invalid_argument("weight layout mismatch");
  if (m.dye == Dye::Reduced)
    throw std::invalid_argument("augmentation bases are defined for plain and general dye models");

  std::vector<Design> bases = d0_collection(layout);
  if (m.dye == Dye::General)
    for (Design& b : bases) b = dye_swap(b);
  const int base_size = bases.front().size();
  if (n_slides < base_size)
    throw std::invalid_argument("fewer slides than the base designs");

  const std::vector<Slide> cands = candidate_slides(layout, m);
  const int k = static_cast<int>(cands.size());
  const int extra = n_slides - base_size;
  const bool dyed = m.dye != Dye::None;

  std::map<std::string, Design> pool;
  for (const Design& base : bases) {
    std::vector<int> combo(extra, 0);
    while (true) {
      Design d = base;
      for (int c : combo) d.slides.push_back(cands[c]);
      Design canon = canonicalize(d, dyed);
      pool.emplace(canon.str(), std::move(canon));
      if (extra == 0 || !next_combo(combo, k)) break;
    }
  }

  SearchResult result;
  for (const auto& [key, d] : pool) {
    const Rational value = criterion_value(d, m, w);
    if (result.optima_count == 0 || value < result.criterion) {
      result.criterion = value;
      result.design = d;
      result.optima_count = 1;
    } else if (value == result.criterion) {
      ++result.optima_count;
    }
  }
  return result;
}

ConjectureReport check_conjecture(const FactorLayout& layout, int n_slides, const Rational& w,
                                  int jobs) {
  if (layout.factors() != 2)
    throw std::invalid_argument("the restricted-class comparison is defined for two factors");
  const int v = layout.treatment_count();
  const int span = (layout.level_count(0) - 1) * (layout.level_count(1) - 1);
  if (n_slides <= v - 1 || n_slides > v - 1 + span)
    throw std::invalid_argument("slide count outside the conjectured range");

  const ModelSpec plain = ModelSpec::plain();
  const CriterionWeights cw = CriterionWeights::two_factor(layout, w);

  SearchOptions omega_opts;
  omega_opts.jobs = jobs;
  omega_opts.restrict_to = canonicalize(construct_dbar(layout)).slides;
  const SearchResult omega = exhaustive_w_optimal(layout, n_slides, plain, cw, omega_opts);

  SearchOptions global_opts;
  global_opts.jobs = jobs;
  const SearchResult global = exhaustive_w_optimal(layout, n_slides, plain, cw, global_opts);

  return {omega.criterion, global.criterion, omega.criterion == global.criterion, omega.design,
          global.design};
}

MinSlidesResult min_slides(const FactorLayout& layout, const ModelSpec& m, int n_max) {
  if (m.replication)
    throw std::invalid_argument("minimal-slide scan does not take a replication plan");
  for (int n = 1; n <= n_max; ++n) {
    const EvalContext ctx = make_context(layout, m, candidate_slides(layout, m), n);
    const int k = static_cast<int>(ctx.candidates.size());
    const long long total = binom(k + n - 1, n);
    std::vector<int> combo(n, 0);
    IntKernel ik(ctx, n);
    RatKernel rk(ctx, n);
    for (int d = 0; d < n; ++d) {
      ik.place(d, 0);
      rk.place(d, 0);
    }
    std::vector<Rational> vars(ctx.n_theta);
    for (long long rank = 0; rank < total; ++rank) {
      if (rank != 0) {
        int i = n - 1;
        while (combo[i] == k - 1) --i;
        ++combo[i];
        for (int j = i + 1; j < n; ++j) combo[j] = combo[i];
        for (int d = i; d < n; ++d) {
          if (ctx.int_kernel)
            ik.place(d, combo[d]);
          else
            rk.place(d, combo[d]);
        }
      }
      const bool ok = ctx.int_kernel ? ik.eval(vars) : rk.eval(vars);
      if (ok) return {n, design_from_combo(ctx, combo)};
    }
  }
  throw NotEstimable("no design keeps every effect estimable within the slide bound");
}

namespace {

// Set partitions of {0..k-1} as restricted growth strings, ordered with the
// finest partitions (most subjects) first.
std::vector<std::vector<int>> partitions_finest_first(int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> rgs(k, 0);
  const auto rec = [&](auto&& self, int i, int next_block) -> void {
    if (i == k) {
      out.push_back(rgs);
      return;
    }
    for (int b = 0; b <= next_block; ++b) {
      rgs[i] = b;
      self(self, i + 1, std::max(next_block, b + 1));
    }
  };
  rec(rec, 0, 0);
  std::stable_sort(out.begin(), out.end(),
                   [](const std::vector<int>& a, const std::vector<int>& b) {
                     const int ba = *std::max_element(a.begin(), a.end());
                     const int bb = *std::max_element(b.begin(), b.end());
                     return ba > bb;
                   });
  return out;
}

}  // namespace

std::vector<ReplicationOptimum> replication_search(const FactorLayout& layout, int n_slides,
                                                   const CriterionWeights& w,
                                                   const std::vector<Rational>& ratio_grid) {
  validate_weights(w);
  if (w.layout != layout) throw std::invalid_argument("weight layout mismatch");
  if (n_slides < 1) throw std::invalid_argument("need at least one slide");

  const ModelSpec plain = ModelSpec::plain();
  const EvalContext ctx = make_context(layout, plain, candidate_slides(layout, plain), n_slides);
  const int k = static_cast<int>(ctx.candidates.size());
  const long long total = binom(k + n_slides - 1, n_slides);
  const auto effects = all_effects(layout);

  // Collect the estimable designs once; estimability does not depend on the
  // covariance as long as it stays positive definite.
  std::vector<std::vector<int>> valid;
  {
    std::vector<int> combo(n_slides, 0);
    IntKernel kernel(ctx, n_slides);
    for (int d = 0; d < n_slides; ++d) kernel.place(d, 0);
    std::vector<Rational> vars(ctx.n_theta);
    for (long long rank = 0; rank < total; ++rank) {
      if (rank != 0) {
        int i = n_slides - 1;
        while (combo[i] == k - 1) --i;
        ++combo[i];
        for (int j = i + 1; j < n_slides; ++j) combo[j] = combo[i];
        for (int d = i; d < n_slides; ++d) kernel.place(d, combo[d]);
      }
      if (kernel.eval(vars)) valid.push_back(combo);
    }
  }
  if (valid.empty())
    throw NotEstimable("no design in the search space keeps every effect estimable");

  std::vector<ReplicationOptimum> out;
  for (const Rational& ratio : ratio_grid) {
    ReplicationOptimum best;
    best.ratio = ratio;
    bool found = false;
    for (const auto& combo : valid) {
      const Design d = design_from_combo(ctx, combo);

      // Occurrences of each treatment as (slide, side) in slide order; a plan
      // is one set partition per treatment.
      std::map<int, std::vector<std::pair<int, int>>> occ;
      for (int s = 0; s < d.size(); ++s) {
        occ[treatment_index(layout, d.slides[s].red)].push_back({s, 0});
        occ[treatment_index(layout, d.slides[s].green)].push_back({s, 1});
      }
      std::vector<int> treatments;
      std::vector<std::vector<std::vector<int>>> choices;
      for (const auto& [t, places] : occ) {
        treatments.push_back(t);
        choices.push_back(partitions_finest_first(static_cast<int>(places.size())));
      }

      std::vector<std::size_t> pick(treatments.size(), 0);
      while (true) {
        ReplicationPlan plan;
        plan.red.resize(d.size());
        plan.green.resize(d.size());
        for (std::size_t ti = 0; ti < treatments.size(); ++ti) {
          const auto& places = occ.at(treatments[ti]);
          const auto& rgs = choices[ti][pick[ti]];
          const std::string stem =
              treatment_str(treatment_from_index(layout, treatments[ti])) + "#";
          for (std::size_t o = 0; o < places.size(); ++o) {
            const std::string label = stem + std::to_string(rgs[o]);
            if (places[o].second == 0)
              plan.red[places[o].first] = label;
            else
              plan.green[places[o].first] = label;
          }
        }

        ModelSpec model = plain;
        model.replication = Replication{plan, ratio};
        SymPsdSolver solver(information_matrix(d, model));
        Rational value;
        bool ok = true;
        for (std::size_t e = 0; e < effects.size(); ++e) {
          if (w.weight[e].is_zero()) continue;
          auto q = solver.quad_form(pad_contrast(baseline_contrast(layout, effects[e]), model));
          if (!q) {
            ok = false;
            break;
          }
          value += w.weight[e] * *q;
        }
        if (ok) {
          if (!found || value < best.criterion) {
            found = true;
            best.criterion = value;
            best.design = d;
            best.plan = plan;
            best.optima_count = 1;
          } else if (value == best.criterion) {
            ++best.optima_count;
          }
        }

        std::size_t i = pick.size();
        while (i > 0 && pick[i - 1] + 1 == choices[i - 1].size()) {
          pick[i - 1] = 0;
          --i;
        }
        if (i == 0) break;
        ++pick[i - 1];
      }
    }
    if (!found)
      throw NotEstimable("no design in the search space keeps every effect estimable");
    out.push_back(std::move(best));
  }
  return out;
}

}  // namespace odx
