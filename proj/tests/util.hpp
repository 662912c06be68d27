#pragma once

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "odx/model.hpp"

namespace odx::testutil {

// Float reimplementation of the generalized-least-squares variance, built
// straight from the model description rather than through the library's
// rational pipeline, so the two paths cross-check each other.
inline std::optional<double> oracle_variance(const Design& d, const ModelSpec& m,
                                             const ContrastVector& c) {
  const int v = d.layout.treatment_count();
  const int n = d.size();
  const int p = v + (m.dye == Dye::General ? v : m.dye == Dye::Reduced ? 1 : 0);

  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, p);
  for (int s = 0; s < n; ++s) {
    const int r = treatment_index(d.layout, d.slides[s].red);
    const int g = treatment_index(d.layout, d.slides[s].green);
    x(s, r) += 1.0;
    x(s, g) -= 1.0;
    if (m.dye == Dye::General) {
      x(s, v + r) += 1.0;
      x(s, v + g) += 1.0;
    } else if (m.dye == Dye::Reduced) {
      x(s, v) = 1.0;
    }
  }

  Eigen::MatrixXd sigma = Eigen::MatrixXd::Identity(n, n);
  if (!m.hetero.empty()) {
    for (int s = 0; s < n; ++s) {
      const int r = treatment_index(d.layout, d.slides[s].red);
      const int g = treatment_index(d.layout, d.slides[s].green);
      sigma(s, s) = (m.hetero[r] + m.hetero[g] + Rational(1)).to_double();
    }
  } else if (m.replication) {
    std::map<std::string, int> subject;
    for (int s = 0; s < n; ++s) {
      subject.emplace(m.replication->plan.red[s], static_cast<int>(subject.size()));
      subject.emplace(m.replication->plan.green[s], static_cast<int>(subject.size()));
    }
    Eigen::MatrixXd share = Eigen::MatrixXd::Zero(n, static_cast<int>(subject.size()));
    for (int s = 0; s < n; ++s) {
      share(s, subject.at(m.replication->plan.red[s])) += 1.0;
      share(s, subject.at(m.replication->plan.green[s])) -= 1.0;
    }
    sigma += m.replication->ratio.to_double() * share * share.transpose();
  }

  const Eigen::MatrixXd info =
      x.transpose() * sigma.ldlt().solve(Eigen::MatrixXd::Identity(n, n)) * x;
  Eigen::VectorXd cv = Eigen::VectorXd::Zero(p);
  for (int t = 0; t < v; ++t) cv[t] = c.coef[t].to_double();
  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(info);
  const Eigen::VectorXd z = cod.solve(cv);
  if ((info * z - cv).lpNorm<Eigen::Infinity>() > 1e-7) return std::nullopt;
  return cv.dot(z);
}

inline Design random_design(const FactorLayout& layout, int n_slides, std::mt19937& rng) {
  const auto treatments = enumerate_treatments(layout);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(treatments.size()) - 1);
  Design d{layout, {}};
  for (int s = 0; s < n_slides; ++s) {
    int r = pick(rng), g = pick(rng);
    while (g == r) g = pick(rng);
    d.slides.push_back({treatments[r], treatments[g]});
  }
  return d;
}

// Random design rejected until every effect is estimable under the model.
inline Design random_estimable_design(const FactorLayout& layout, int n_slides,
                                      const ModelSpec& m, std::mt19937& rng) {
  while (true) {
    const Design d = random_design(layout, n_slides, rng);
    try {
      variance_report(d, m);
      return d;
    } catch (const NotEstimable&) {
    }
  }
}

// Lexicographic multiset enumeration over candidate indices, independent of
// the library's search internals.
inline bool next_multiset(std::vector<int>& combo, int k) {
  int i = static_cast<int>(combo.size()) - 1;
  while (i >= 0 && combo[i] == k - 1) --i;
  if (i < 0) return false;
  ++combo[i];
  for (std::size_t j = i + 1; j < combo.size(); ++j) combo[j] = combo[i];
  return true;
}

}  // namespace odx::testutil
