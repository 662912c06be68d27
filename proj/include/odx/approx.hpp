#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "odx/model.hpp"
#include "odx/search.hpp"

namespace odx {

// Coordinates used for continuous-design criteria. Baseline works for any
// layout; Orthogonal needs every factor at two levels.
enum class Parametrization { Baseline, Orthogonal };

// A probability distribution over candidate slides. This module works in
// binary64; everything exact stays in the rational modules.
struct DesignMeasure {
  FactorLayout layout;
  std::vector<Slide> slides;
  std::vector<double> mass;  // aligned with slides, nonnegative, sums to 1
};

// Throws std::invalid_argument on size mismatches, invalid or duplicate
// slides, negative masses, or a total mass off 1 by more than 1e-9.
void validate_measure(const DesignMeasure& m);

// Slide frequencies divided by the slide count.
DesignMeasure measure_from_design(const Design& d, bool dye_sensitive = false);

// Weighted sum of effect variances under the per-unit-mass information
// matrix, so measure_from_design(d) evaluates to size(d) times the exact
// criterion of d. Throws NotEstimable when the support cannot estimate a
// positively weighted effect.
double measure_criterion(const DesignMeasure& m, const ModelSpec& model,
                         const CriterionWeights& w, Parametrization par);

class NoConvergence : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Minimizes the criterion over measures on the model's candidate slides by
// multiplicative updates from several deterministic starting points. The
// result carries a first-order certificate: no candidate's directional
// derivative falls below -tol relative to the optimum. Throws NoConvergence
// when no restart certifies within the iteration cap.
DesignMeasure optimize_measure(const FactorLayout& layout, const ModelSpec& model,
                               const CriterionWeights& w, Parametrization par,
                               double tol = 1e-10, unsigned seed = 0);

// Baseline 2x2 optimum (1/2-xi, 1/2-xi, 0, 0, xi, xi) over the slide kinds
// in frequency order, with xi = ((w^2+2w)^(1/2) - w)/4.
DesignMeasure closed_form_pi0(const FactorLayout& layout, double w);

// Orthogonal 2x2 optimum (a, a, 1/2-2a, 1/2-2a, a, a) with
// a = (w^(1/2)/2)/(2 + w^(1/2)) for w < 4, and (1/4, 1/4, 0, 0, 1/4, 1/4)
// from w = 4 on.
DesignMeasure closed_form_orth(const FactorLayout& layout, double w);

// 100 times the optimal measure criterion over the input's per-unit-mass
// criterion, in (0, 100].
double efficiency(const DesignMeasure& m, const ModelSpec& model, const CriterionWeights& w,
                  Parametrization par);
double efficiency(const Design& d, const ModelSpec& model, const CriterionWeights& w,
                  Parametrization par);

// Nearest-integer apportionment of N times the masses, corrected to total N
// by moving single slides with the largest rounding gaps. Throws NotEstimable
// when the rounded design cannot estimate every effect of the plain model.
Design round_measure(const DesignMeasure& m, int n_slides);

// Efficiency of the homoscedastic baseline optimum closed_form_pi0(w) when
// the per-treatment variance excesses are gamma2, against the measure
// optimized under that heteroscedastic model.
double hetero_efficiency(const FactorLayout& layout, const std::vector<Rational>& gamma2,
                         const Rational& w);

}  // namespace odx
