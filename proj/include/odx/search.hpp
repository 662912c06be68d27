#pragma once

#include <vector>

#include "odx/factorial.hpp"
#include "odx/model.hpp"

namespace odx {

struct CriterionWeights {
  FactorLayout layout;
  std::vector<Rational> weight;  // aligned with all_effects(layout)

  // 1 on main effects, w on every effect of order two or more.
  static CriterionWeights two_factor(const FactorLayout& layout, const Rational& w);
};

// Weights must be nonnegative with at least one positive entry.
void validate_weights(const CriterionWeights& w);

struct SearchResult {
  Rational criterion;
  Design design;  // canonical representative, lexicographically smallest
  long long optima_count = 0;
  std::vector<Design> optima;  // filled only when requested
};

// Weighted sum of effect variances. Only the positively weighted effects
// need to be estimable; throws NotEstimable otherwise.
Rational criterion_value(const Design& d, const ModelSpec& m, const CriterionWeights& w);

// The enumeration alphabet: unordered treatment pairs (red lexicographically
// smaller) for plain models, ordered pairs when a dye block is present.
std::vector<Slide> candidate_slides(const FactorLayout& layout, const ModelSpec& m);

struct SearchOptions {
  std::vector<Slide> restrict_to;  // empty = all candidates of the model
  int jobs = 1;
  bool collect_optima = false;
  // Evaluate every candidate through the generic rational path instead of
  // the incremental integer kernel; serial, kept as a cross-check.
  bool reference_kernel = false;
};

// Global minimum of the criterion over all size-N slide multisets whose
// designs keep every factorial effect estimable. Deterministic: candidates
// are scanned in lexicographic order and ties keep the earliest design, so
// the result does not depend on the worker count. Throws NotEstimable when
// the space contains no fully estimable design.
SearchResult exhaustive_w_optimal(const FactorLayout& layout, int n_slides, const ModelSpec& m,
                                  const CriterionWeights& w, const SearchOptions& opts = {});

// One pass over the search space evaluating several weightings at once.
std::vector<SearchResult> exhaustive_w_optimal_batch(const FactorLayout& layout, int n_slides,
                                                     const ModelSpec& m,
                                                     const std::vector<CriterionWeights>& ws,
                                                     const SearchOptions& opts = {});

// All fully estimable designs whose per-effect variance vector is not
// dominated (componentwise <= with at least one strict) by another design in
// the space. Canonical forms, lexicographically sorted.
std::vector<Design> pareto_admissible(const FactorLayout& layout, int n_slides,
                                      const ModelSpec& m, const SearchOptions& opts = {});

// The same dominance filter over an explicit list of designs.
std::vector<Design> pareto_admissible_among(const std::vector<Design>& candidates,
                                            const ModelSpec& m);

// Best design over all ways of adding N - base slides to each saturated base
// design (their dye-swaps under GeneralDye). Distinct augmented designs are
// counted once.
SearchResult augment_optimal(const FactorLayout& layout, int n_slides, const ModelSpec& m,
                             const CriterionWeights& w);

struct ConjectureReport {
  Rational omega_value;   // optimum over multisets of the pooled design's slides
  Rational global_value;  // unrestricted optimum
  bool equal = false;
  Design omega_design;
  Design global_design;
};

// Compares the restricted and unrestricted optima for a two-factor layout
// under the two_factor(w) criterion. Requires v-1 < N <= v-1+(s1-1)(s2-1).
ConjectureReport check_conjecture(const FactorLayout& layout, int n_slides, const Rational& w,
                                  int jobs = 1);

struct MinSlidesResult {
  int n_slides = 0;
  Design witness;
};

// Smallest N (up to n_max) for which some design keeps every effect
// estimable, with the first witness in enumeration order.
MinSlidesResult min_slides(const FactorLayout& layout, const ModelSpec& m, int n_max);

struct ReplicationOptimum {
  Rational ratio;
  Rational criterion;
  Design design;
  ReplicationPlan plan;
  long long optima_count = 0;
};

// Minimizes the weighted criterion over plain-model designs of N slides
// together with every assignment of slide channels to subjects, for each
// variance ratio in the grid. Plans with more subjects are scanned first, so
// a tie is resolved toward biological replication.
std::vector<ReplicationOptimum> replication_search(const FactorLayout& layout, int n_slides,
                                                   const CriterionWeights& w,
                                                   const std::vector<Rational>& ratio_grid);

}  // namespace odx
