#include "odx/approx.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace odx {

namespace {

constexpr double kMassFloor = 1e-12;
constexpr int kIterationCap = 100000;
constexpr int kRestarts = 20;

void check_measure_model(const FactorLayout& layout, const ModelSpec& model,
                         Parametrization par) {
  if (model.replication)
    throw std::invalid_argument("design measures do not cover correlated replication");
  if (!model.hetero.empty()) {
    if (static_cast<int>(model.hetero.size()) != layout.treatment_count())
      throw std::invalid_argument("heteroscedastic entries must cover every treatment");
    for (const Rational& g : model.hetero)
      if (g.sign() < 0)
        throw std::invalid_argument("heteroscedastic entries must be nonnegative");
  }
  if (par == Parametrization::Orthogonal)
    for (int j = 0; j < layout.factors(); ++j)
      if (layout.level_count(j) != 2)
        throw std::invalid_argument("orthogonal coordinates need every factor at two levels");
}

// Per-slide coordinate rows, scaled so the information matrix of a measure is
// the mass-weighted sum of their outer products.
std::vector<Eigen::VectorXd> measure_rows(const FactorLayout& layout, const ModelSpec& model,
                                          const std::vector<Slide>& slides, Parametrization par,
                                          int* p_out) {
  const int v = layout.treatment_count();
  const int n_theta = v - 1;
  const int p =
      n_theta + (model.dye == Dye::General ? v : model.dye == Dye::Reduced ? 1 : 0);
  *p_out = p;

  std::vector<std::vector<int>> codes;
  if (par == Parametrization::Baseline) {
    codes = theta_codes(layout);
  } else {
    // codes[t][e] = product over the effect's support of +-1 by t's level
    const auto effects = all_effects(layout);
    const auto treatments = enumerate_treatments(layout);
    codes.assign(v, std::vector<int>(n_theta, 0));
    for (int t = 0; t < v; ++t)
      for (int e = 0; e < n_theta; ++e) {
        int prod = 1;
        for (int j = 0; j < layout.factors(); ++j)
          if (effects[e].index()[j] != 0) prod *= treatments[t][j] == 1 ? 1 : -1;
        codes[t][e] = prod;
      }
  }

  std::vector<Eigen::VectorXd> rows;
  for (const Slide& s : slides) {
    const int r = treatment_index(layout, s.red);
    const int g = treatment_index(layout, s.green);
    Eigen::VectorXd row = Eigen::VectorXd::Zero(p);
    const double half = par == Parametrization::Orthogonal ? 0.5 : 1.0;
    for (int e = 0; e < n_theta; ++e) row[e] = half * (codes[r][e] - codes[g][e]);
    if (model.dye == Dye::Reduced) {
      row[n_theta] = 1.0;
    } else if (model.dye == Dye::General) {
      row[n_theta + r] += 1.0;
      row[n_theta + g] += 1.0;
    }
    if (!model.hetero.empty()) {
      const double var = (model.hetero[r] + model.hetero[g] + Rational(1)).to_double();
      row /= std::sqrt(var);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd information_of(const std::vector<Eigen::VectorXd>& rows,
                               const std::vector<double>& mass, int p) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p, p);
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (mass[i] > 0.0) m.noalias() += mass[i] * rows[i] * rows[i].transpose();
  return m;
}

double criterion_of(const Eigen::MatrixXd& m, const CriterionWeights& w, int n_theta,
                    std::string* failing) {
  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(m);
  const auto effects = all_effects(w.layout);
  double value = 0.0;
  for (int e = 0; e < n_theta; ++e) {
    if (w.weight[e].is_zero()) continue;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(m.rows());
    c[e] = 1.0;
    const Eigen::VectorXd z = cod.solve(c);
    if ((m * z - c).lpNorm<Eigen::Infinity>() > 1e-8) {
      if (failing) *failing = effects[e].str();
      return std::numeric_limits<double>::infinity();
    }
    value += w.weight[e].to_double() * c.dot(z);
  }
  return value;
}

struct Certified {
  bool ok = false;
  double criterion = std::numeric_limits<double>::infinity();
  std::vector<double> mass;
};

// One multiplicative-update run from a given interior starting point. The
// update exponent 1/2 keeps the weighted-trace criterion monotone; the run
// certifies when no candidate's directional derivative is below -tol
// relative to the criterion.
Certified run_restart(const std::vector<Eigen::VectorXd>& rows, const Eigen::VectorXd& wdiag,
                      std::vector<double> pi, int p, double tol) {
  const int k = static_cast<int>(pi.size());
  Eigen::VectorXd d(k);
  double phi = 0.0;
  const auto evaluate = [&](const std::vector<double>& mass) {
    const Eigen::MatrixXd m = information_of(rows, mass, p);
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) return false;
    const Eigen::MatrixXd inv = ldlt.solve(Eigen::MatrixXd::Identity(p, p));
    phi = (wdiag.array() * inv.diagonal().array()).sum();
    if (!std::isfinite(phi) || phi <= 0.0) return false;
    const Eigen::MatrixXd g = inv * wdiag.asDiagonal() * inv;
    for (int s = 0; s < k; ++s) d[s] = rows[s].dot(g * rows[s]);
    return true;
  };

  // Multiplicative updates over the candidates flagged active; exits early
  // once no active candidate beats the criterion by more than tol.
  const auto sweep = [&](std::vector<double>& mass, const std::vector<char>& active) {
    for (int it = 0; it < kIterationCap; ++it) {
      if (!evaluate(mass)) return false;
      double worst = -std::numeric_limits<double>::infinity();
      for (int s = 0; s < k; ++s)
        if (active[s]) worst = std::max(worst, d[s] - phi);
      if (worst <= tol * phi) return true;
      double sum = 0.0;
      for (int s = 0; s < k; ++s) {
        if (!active[s]) continue;
        mass[s] *= std::sqrt(std::max(d[s], 0.0) / phi);
        sum += mass[s];
      }
      if (sum <= 0.0) return false;
      for (int s = 0; s < k; ++s)
        if (active[s]) mass[s] /= sum;
    }
    return evaluate(mass);
  };

  // Clamp stray mass, then accept only on the certificate over every
  // candidate, active or not.
  const auto finish = [&](std::vector<double> mass) -> Certified {
    double clamped_sum = 0.0;
    for (double& x : mass) {
      if (x < kMassFloor) x = 0.0;
      clamped_sum += x;
    }
    if (clamped_sum <= 0.0) return {};
    for (double& x : mass) x /= clamped_sum;
    if (!evaluate(mass)) return {};
    if (d.maxCoeff() - phi > tol * phi) return {};
    return {true, phi, std::move(mass)};
  };

  const std::vector<char> all(k, 1);
  if (!sweep(pi, all)) return {};

  // At a support-boundary weight the excluded candidates sit exactly on the
  // optimality margin and their mass decays only like 1/iteration, either
  // stalling the sweep or polluting a certified point with stray mass. Try
  // pruning the near-zero tail first; the certificate over all candidates
  // rejects any over-aggressive cut.
  for (const double eps : {1e-3, 1e-5, 1e-7}) {
    std::vector<char> active(k, 0);
    std::vector<double> mass = pi;
    double kept_sum = 0.0;
    int kept = 0;
    for (int s = 0; s < k; ++s) {
      if (mass[s] >= eps) {
        active[s] = 1;
        ++kept;
        kept_sum += mass[s];
      } else {
        mass[s] = 0.0;
      }
    }
    if (kept == 0 || kept == k || kept_sum <= 0.0) continue;
    for (int s = 0; s < k; ++s)
      if (active[s]) mass[s] /= kept_sum;
    if (!sweep(mass, active)) continue;
    if (Certified done = finish(mass); done.ok) return done;
  }
  return finish(pi);
}

DesignMeasure kinds_measure_2x2(const FactorLayout& layout, const std::vector<double>& mass) {
  if (layout.levels() != std::vector<int>{2, 2})
    throw std::invalid_argument("closed forms are specific to the 2x2 layout");
  DesignMeasure m;
  m.layout = layout;
  m.slides = candidate_slides(layout, ModelSpec::plain());
  m.mass = mass;
  return m;
}

}  // namespace

void validate_measure(const DesignMeasure& m) {
  if (m.slides.empty() || m.slides.size() != m.mass.size())
    throw std::invalid_argument("measure needs one mass per slide");
  double sum = 0.0;
  for (std::size_t i = 0; i < m.slides.size(); ++i) {
    const Slide& s = m.slides[i];
    if (!treatment_valid(m.layout, s.red) || !treatment_valid(m.layout, s.green) ||
        s.red == s.green)
      throw std::invalid_argument("invalid slide " + s.str());
    for (std::size_t j = i + 1; j < m.slides.size(); ++j)
      if (m.slides[j] == s) throw std::invalid_argument("duplicate slide " + s.str());
    if (m.mass[i] < 0.0) throw std::invalid_argument("negative mass on " + s.str());
    sum += m.mass[i];
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("masses sum to " + std::to_string(sum) + ", expected 1");
}

DesignMeasure measure_from_design(const Design& d, bool dye_sensitive) {
  validate_design(d);
  const Design canon = canonicalize(d, dye_sensitive);
  DesignMeasure m;
  m.layout = d.layout;
  for (const Slide& s : canon.slides) {
    if (!m.slides.empty() && m.slides.back() == s) {
      m.mass.back() += 1.0;
    } else {
      m.slides.push_back(s);
      m.mass.push_back(1.0);
    }
  }
  for (double& x : m.mass) x /= canon.size();
  return m;
}

double measure_criterion(const DesignMeasure& m, const ModelSpec& model,
                         const CriterionWeights& w, Parametrization par) {
  validate_measure(m);
  validate_weights(w);
  if (w.layout != m.layout) throw std::invalid_argument("weight layout mismatch");
  check_measure_model(m.layout, model, par);
  int p = 0;
  const auto rows = measure_rows(m.layout, model, m.slides, par, &p);
  std::string failing;
  const double value =
      criterion_of(information_of(rows, m.mass, p), w, m.layout.treatment_count() - 1, &failing);
  if (!std::isfinite(value))
    throw NotEstimable("measure support cannot estimate effect " + failing, {failing});
  return value;
}

DesignMeasure optimize_measure(const FactorLayout& layout, const ModelSpec& model,
                               const CriterionWeights& w, Parametrization par, double tol,
                               unsigned seed) {
  validate_weights(w);
  if (w.layout != layout) throw std::invalid_argument("weight layout mismatch");
  check_measure_model(layout, model, par);
  const std::vector<Slide> cands = candidate_slides(layout, model);
  const int k = static_cast<int>(cands.size());
  int p = 0;
  const auto rows = measure_rows(layout, model, cands, par, &p);
  Eigen::VectorXd wdiag = Eigen::VectorXd::Zero(p);
  for (int e = 0; e < layout.treatment_count() - 1; ++e) wdiag[e] = w.weight[e].to_double();

  std::vector<Certified> outcomes(kRestarts);
#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < kRestarts; ++r) {
    std::vector<double> pi(k, 1.0 / k);
    if (r > 0) {
      std::mt19937 gen(9001 + 17 * static_cast<unsigned>(r) + seed);
      std::exponential_distribution<double> ed(1.0);
      double sum = 0.0;
      for (double& x : pi) {
        x = ed(gen) + 1e-6;
        sum += x;
      }
      for (double& x : pi) x /= sum;
    }
    outcomes[r] = run_restart(rows, wdiag, std::move(pi), p, tol);
  }

  const Certified* best = nullptr;
  for (const Certified& c : outcomes) {
    if (!c.ok) continue;
    if (!best || c.criterion < best->criterion ||
        (c.criterion == best->criterion && c.mass < best->mass))
      best = &c;
  }
  if (!best)
    throw NoConvergence("measure optimization did not reach its optimality certificate");
  return {layout, cands, best->mass};
}

DesignMeasure closed_form_pi0(const FactorLayout& layout, double w) {
  if (w <= 0.0) throw std::invalid_argument("weight must be positive");
  const double xi = 0.25 * (std::sqrt(w * w + 2.0 * w) - w);
  return kinds_measure_2x2(layout, {0.5 - xi, 0.5 - xi, 0.0, 0.0, xi, xi});
}

DesignMeasure closed_form_orth(const FactorLayout& layout, double w) {
  if (w <= 0.0) throw std::invalid_argument("weight must be positive");
  if (w >= 4.0) return kinds_measure_2x2(layout, {0.25, 0.25, 0.0, 0.0, 0.25, 0.25});
  const double a = 0.5 * std::sqrt(w) / (2.0 + std::sqrt(w));
  return kinds_measure_2x2(layout, {a, a, 0.5 - 2.0 * a, 0.5 - 2.0 * a, a, a});
}

double efficiency(const DesignMeasure& m, const ModelSpec& model, const CriterionWeights& w,
                  Parametrization par) {
  const double own = measure_criterion(m, model, w, par);
  const DesignMeasure opt = optimize_measure(m.layout, model, w, par);
  const double best = measure_criterion(opt, model, w, par);
  return std::min(100.0, 100.0 * best / own);
}

double efficiency(const Design& d, const ModelSpec& model, const CriterionWeights& w,
                  Parametrization par) {
  return efficiency(measure_from_design(d, model.dye != Dye::None), model, w, par);
}

Design round_measure(const DesignMeasure& m, int n_slides) {
  validate_measure(m);
  if (n_slides < 1) throw std::invalid_argument("need at least one slide");
  const int k = static_cast<int>(m.slides.size());
  std::vector<long long> freq(k);
  long long total = 0;
  for (int i = 0; i < k; ++i) {
    freq[i] = std::llround(n_slides * m.mass[i]);
    total += freq[i];
  }
  while (total != n_slides) {
    // Move one slide at a time where rounding lost or gained the most.
    int pick = -1;
    double gap = -1.0;
    for (int i = 0; i < k; ++i) {
      const double g = total < n_slides ? n_slides * m.mass[i] - freq[i]
                                        : freq[i] - n_slides * m.mass[i];
      if (g > gap && (total < n_slides || freq[i] > 0)) {
        gap = g;
        pick = i;
      }
    }
    freq[pick] += total < n_slides ? 1 : -1;
    total += total < n_slides ? 1 : -1;
  }
  Design d{m.layout, {}};
  for (int i = 0; i < k; ++i)
    for (long long c = 0; c < freq[i]; ++c) d.slides.push_back(m.slides[i]);
  Design canon = canonicalize(d);
  variance_report(canon, ModelSpec::plain());
  return canon;
}

double hetero_efficiency(const FactorLayout& layout, const std::vector<Rational>& gamma2,
                         const Rational& w) {
  ModelSpec model = ModelSpec::plain();
  model.hetero = gamma2;
  const CriterionWeights cw = CriterionWeights::two_factor(layout, w);
  const DesignMeasure pi0 = closed_form_pi0(layout, w.to_double());
  return efficiency(pi0, model, cw, Parametrization::Baseline);
}

}  // namespace odx
