#include "odx/model.hpp"

#include <map>
#include <sstream>
#include <string>
#include <utility>

namespace odx {

ReplicationPlan ReplicationPlan::all_biological(int n_slides) {
  ReplicationPlan p;
  for (int i = 0; i < n_slides; ++i) {
    p.red.push_back("r" + std::to_string(i));
    p.green.push_back("g" + std::to_string(i));
  }
  return p;
}

void validate_model(const Design& d, const ModelSpec& m) {
  validate_design(d);
  const int v = d.layout.treatment_count();
  if (!m.hetero.empty()) {
    if (static_cast<int>(m.hetero.size()) != v)
      throw std::invalid_argument("per-treatment variance list must cover every treatment");
    for (const Rational& g : m.hetero)
      if (g.sign() < 0) throw std::invalid_argument("per-treatment variances must be >= 0");
    if (m.replication)
      throw std::invalid_argument("replication requires a common per-channel variance");
  }
  if (m.replication) {
    if (m.replication->ratio.sign() < 0)
      throw std::invalid_argument("subject variance ratio must be >= 0");
    const ReplicationPlan& p = m.replication->plan;
    const std::size_t n = d.slides.size();
    if (p.red.size() != n || p.green.size() != n)
      throw std::invalid_argument("replication plan must label every slide");
    std::map<std::string, Treatment> owner;
    for (std::size_t s = 0; s < n; ++s) {
      for (int side = 0; side < 2; ++side) {
        const std::string& label = side == 0 ? p.red[s] : p.green[s];
        const Treatment& t = side == 0 ? d.slides[s].red : d.slides[s].green;
        if (label.empty()) throw std::invalid_argument("empty subject label");
        auto [it, inserted] = owner.emplace(label, t);
        if (!inserted && it->second != t)
          throw std::invalid_argument("subject label " + label +
                                      " attached to more than one treatment");
      }
    }
  }
}

int param_count(const FactorLayout& layout, const ModelSpec& m) {
  const int v = layout.treatment_count();
  switch (m.dye) {
    case Dye::None:
      return v;
    case Dye::General:
      return 2 * v;
    case Dye::Reduced:
      return v + 1;
  }
  return v;
}

RatMat model_rows(const Design& d, const ModelSpec& m) {
  const int v = d.layout.treatment_count();
  const int p = param_count(d.layout, m);
  RatMat x(d.size(), p);
  for (int s = 0; s < d.size(); ++s) {
    const int r = treatment_index(d.layout, d.slides[s].red);
    const int g = treatment_index(d.layout, d.slides[s].green);
    x.at(s, r) += Rational(1);
    x.at(s, g) -= Rational(1);
    if (m.dye == Dye::General) {
      x.at(s, v + r) += Rational(1);
      x.at(s, v + g) += Rational(1);
    } else if (m.dye == Dye::Reduced) {
      x.at(s, v) = Rational(1);
    }
  }
  return x;
}

RatMat observation_covariance(const Design& d, const ModelSpec& m) {
  const int n = d.size();
  RatMat sigma(n, n);
  if (m.replication) {
    const ReplicationPlan& p = m.replication->plan;
    const Rational r = m.replication->ratio;
    for (int s = 0; s < n; ++s) sigma.at(s, s) = Rational(2) * r + Rational(1);
    for (int s = 0; s < n; ++s)
      for (int t = s + 1; t < n; ++t) {
        Rational c;
        if (p.red[s] == p.red[t]) c += r;
        if (p.green[s] == p.green[t]) c += r;
        if (p.red[s] == p.green[t]) c -= r;
        if (p.green[s] == p.red[t]) c -= r;
        sigma.at(s, t) = c;
        sigma.at(t, s) = c;
      }
  } else if (!m.hetero.empty()) {
    for (int s = 0; s < n; ++s) {
      const int r = treatment_index(d.layout, d.slides[s].red);
      const int g = treatment_index(d.layout, d.slides[s].green);
      sigma.at(s, s) = m.hetero[r] + m.hetero[g] + Rational(1);
    }
  } else {
    for (int s = 0; s < n; ++s) sigma.at(s, s) = Rational(1);
  }
  return sigma;
}

RatMat information_matrix(const Design& d, const ModelSpec& m) {
  validate_model(d, m);
  const RatMat x = model_rows(d, m);
  const int n = x.rows;
  const int p = x.cols;
  if (m.replication) {
    const RatMat w = pd_inverse(observation_covariance(d, m));
    return x.transposed() * (w * x);
  }
  RatMat info(p, p);
  const RatMat sigma = observation_covariance(d, m);
  for (int s = 0; s < n; ++s) {
    const Rational w = sigma.at(s, s).inverse();
    for (int j = 0; j < p; ++j) {
      if (x.at(s, j).is_zero()) continue;
      const Rational wj = w * x.at(s, j);
      for (int k = j; k < p; ++k)
        if (!x.at(s, k).is_zero()) info.at(j, k) += wj * x.at(s, k);
    }
  }
  for (int j = 0; j < p; ++j)
    for (int k = 0; k < j; ++k) info.at(j, k) = info.at(k, j);
  return info;
}

RatVec pad_contrast(const ContrastVector& c, const ModelSpec& m) {
  RatVec out(param_count(c.layout, m));
  for (std::size_t i = 0; i < c.coef.size(); ++i) out[i] = c.coef[i];
  return out;
}

bool is_estimable(const Design& d, const ModelSpec& m, const ContrastVector& c) {
  if (c.layout != d.layout) throw std::invalid_argument("contrast layout mismatch");
  SymPsdSolver solver(information_matrix(d, m));
  return solver.consistent(pad_contrast(c, m));
}

Rational blue_variance(const Design& d, const ModelSpec& m, const ContrastVector& c) {
  if (c.layout != d.layout) throw std::invalid_argument("contrast layout mismatch");
  SymPsdSolver solver(information_matrix(d, m));
  auto var = solver.quad_form(pad_contrast(c, m));
  if (!var) throw NotEstimable("contrast is not estimable under this design");
  return *var;
}

std::string VarianceReport::to_csv() const {
  std::ostringstream os;
  os << "effect,order,variance\n";
  const auto effects = all_effects(layout);
  for (std::size_t i = 0; i < effects.size(); ++i)
    os << effects[i].str() << "," << effects[i].order() << "," << variances[i].str() << "\n";
  return os.str();
}

VarianceReport variance_report(const Design& d, const ModelSpec& m) {
  SymPsdSolver solver(information_matrix(d, m));
  VarianceReport report{d.layout, {}};
  std::vector<std::string> failing;
  for (const EffectIndex& e : all_effects(d.layout)) {
    auto var = solver.quad_form(pad_contrast(baseline_contrast(d.layout, e), m));
    if (var)
      report.variances.push_back(*var);
    else
      failing.push_back(e.str());
  }
  if (!failing.empty()) {
    std::string msg = "design cannot estimate effect(s):";
    for (const std::string& f : failing) msg += " " + f;
    throw NotEstimable(msg, failing);
  }
  return report;
}

std::vector<std::vector<int>> theta_codes(const FactorLayout& layout) {
  const auto treatments = enumerate_treatments(layout);
  const auto effects = all_effects(layout);
  std::vector<std::vector<int>> codes(treatments.size(), std::vector<int>(effects.size(), 0));
  for (std::size_t t = 0; t < treatments.size(); ++t)
    for (std::size_t e = 0; e < effects.size(); ++e) {
      const Treatment& idx = effects[e].index();
      bool match = true;
      for (std::size_t j = 0; j < idx.size(); ++j)
        if (idx[j] != 0 && treatments[t][j] != idx[j]) {
          match = false;
          break;
        }
      codes[t][e] = match ? 1 : 0;
    }
  return codes;
}

std::vector<int> theta_slide_row(const std::vector<std::vector<int>>& codes, int red_index,
                                 int green_index) {
  std::vector<int> row(codes[red_index].size());
  for (std::size_t e = 0; e < row.size(); ++e)
    row[e] = codes[red_index][e] - codes[green_index][e];
  return row;
}

}  // namespace odx
