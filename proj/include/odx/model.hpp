#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "odx/factorial.hpp"
#include "odx/ratlin.hpp"

namespace odx {

enum class Dye {
  None,     // log-ratio depends on the two treatment effects only
  General,  // adds one dye-bias parameter per treatment (lambda block)
  Reduced   // adds a single common dye-bias parameter (eta column)
};

// Subject labels for both channels of every slide. Slides sharing a label
// reuse one sample, which correlates their log-ratios.
struct ReplicationPlan {
  std::vector<std::string> red;
  std::vector<std::string> green;

  static ReplicationPlan all_biological(int n_slides);
};

struct Replication {
  ReplicationPlan plan;
  Rational ratio;  // subject-effect variance over technical-error variance
};

struct ModelSpec {
  Dye dye = Dye::None;
  // Per-treatment excess variance of a single-channel log intensity, indexed
  // like enumerate_treatments; empty means a common value for every treatment.
  std::vector<Rational> hetero;
  std::optional<Replication> replication;

  static ModelSpec plain() { return {}; }
  static ModelSpec general_dye() { return {Dye::General, {}, {}}; }
  static ModelSpec reduced_dye() { return {Dye::Reduced, {}, {}}; }

  bool homoscedastic() const { return hetero.empty() && !replication; }
};

// Throws std::invalid_argument on layout mismatches, negative heteroscedastic
// entries, replication combined with heteroscedastic noise, or subject labels
// attached to more than one treatment.
void validate_model(const Design& d, const ModelSpec& m);

// Mean parameters: v treatment effects plus the dye block.
int param_count(const FactorLayout& layout, const ModelSpec& m);

// One row per slide: +1 at the red treatment, -1 at the green one, followed
// by the dye block (+1/+1 per-treatment biases, or a single +1 column).
RatMat model_rows(const Design& d, const ModelSpec& m);

// Covariance of the log-ratios, in units of the common technical variance.
RatMat observation_covariance(const Design& d, const ModelSpec& m);

RatMat information_matrix(const Design& d, const ModelSpec& m);

// Zero-extends a treatment contrast over the dye parameters.
RatVec pad_contrast(const ContrastVector& c, const ModelSpec& m);

class NotEstimable : public std::runtime_error {
public:
  explicit NotEstimable(const std::string& what, std::vector<std::string> effects = {})
      : std::runtime_error(what), effects_(std::move(effects)) {}
  const std::vector<std::string>& effects() const { return effects_; }

private:
  std::vector<std::string> effects_;
};

bool is_estimable(const Design& d, const ModelSpec& m, const ContrastVector& c);

// Exact generalized-least-squares variance of the best linear unbiased
// estimator of the contrast, via a rational symmetric generalized inverse.
// Throws NotEstimable when the contrast is outside the information row space.
Rational blue_variance(const Design& d, const ModelSpec& m, const ContrastVector& c);

struct VarianceReport {
  FactorLayout layout;
  std::vector<Rational> variances;  // aligned with all_effects(layout)

  // Header "effect,order,variance", one row per effect in order.
  std::string to_csv() const;
};

// Variances of every factorial effect; throws NotEstimable naming all the
// effects the design cannot estimate (no partial reports).
VarianceReport variance_report(const Design& d, const ModelSpec& m);

// Reduced coordinates: every treatment mean is an intercept plus a 0/1
// combination of the factorial effects, and the intercept cancels in a
// slide's difference. codes[treatment_index][effect_index] is the 0/1 weight;
// a slide contributes codes[red] - codes[green], entries in {-1, 0, 1}.
std::vector<std::vector<int>> theta_codes(const FactorLayout& layout);

std::vector<int> theta_slide_row(const std::vector<std::vector<int>>& codes,
                                 int red_index, int green_index);

}  // namespace odx
