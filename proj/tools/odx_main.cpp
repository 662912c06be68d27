#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "odx/approx.hpp"
#include "odx/constructions.hpp"
#include "odx/json_io.hpp"

namespace {

using namespace odx;

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

std::string human(const Rational& q) {
  std::ostringstream os;
  os << q.str() << " (≈" << q.to_double() << ")";
  return os.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

ModelSpec parse_model(const FactorLayout& layout, const std::string& name,
                      const std::string& hetero, const std::string& replication_path,
                      const std::string& ratio) {
  ModelSpec m;
  if (name == "plain")
    m.dye = Dye::None;
  else if (name == "dye")
    m.dye = Dye::General;
  else if (name == "dye-reduced")
    m.dye = Dye::Reduced;
  else
    throw std::invalid_argument("unknown model " + name);

  if (!hetero.empty()) {
    const int v = layout.treatment_count();
    std::vector<Rational> gamma2(v);
    std::vector<bool> seen(v, false);
    for (const std::string& part : split(hetero, ',')) {
      const auto eq = part.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("expected treatment=value, got " + part);
      const int t = treatment_index(layout, treatment_parse(layout, part.substr(0, eq)));
      gamma2[t] = Rational::parse(part.substr(eq + 1));
      seen[t] = true;
    }
    for (int t = 0; t < v; ++t)
      if (!seen[t])
        throw std::invalid_argument("missing variance for treatment " +
                                    treatment_str(treatment_from_index(layout, t)));
    m.hetero = std::move(gamma2);
  }

  if (!replication_path.empty()) {
    if (ratio.empty()) throw std::invalid_argument("--replication needs --ratio");
    m.replication = Replication{plan_from_json(read_json_file(replication_path)),
                                Rational::parse(ratio)};
  } else if (!ratio.empty()) {
    throw std::invalid_argument("--ratio needs --replication");
  }
  return m;
}

CriterionWeights parse_weights(const FactorLayout& layout, const std::string& arg) {
  if (arg.find('=') == std::string::npos)
    return CriterionWeights::two_factor(layout, Rational::parse(arg));
  CriterionWeights w{layout, std::vector<Rational>(layout.treatment_count() - 1)};
  const auto effects = all_effects(layout);
  for (const std::string& part : split(arg, ',')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("expected effect=weight, got " + part);
    const EffectIndex e(layout, treatment_parse(layout, part.substr(0, eq)));
    const auto it = std::find(effects.begin(), effects.end(), e);
    w.weight[it - effects.begin()] = Rational::parse(part.substr(eq + 1));
  }
  validate_weights(w);
  return w;
}

int resolve_jobs(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("BASELINE_ODX_JOBS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

std::vector<int> parse_permutation(const std::string& arg, int n) {
  std::vector<int> perm;
  for (const std::string& part : split(arg, ',')) perm.push_back(std::stoi(part) - 1);
  std::vector<bool> seen(n, false);
  if (static_cast<int>(perm.size()) != n)
    throw std::invalid_argument("permutation must list every factor once");
  for (int p : perm) {
    if (p < 0 || p >= n || seen[p])
      throw std::invalid_argument("permutation must list every factor once");
    seen[p] = true;
  }
  return perm;
}

Design permuted_d0(const FactorLayout& layout, const std::vector<int>& perm) {
  std::vector<int> levels;
  for (int p : perm) levels.push_back(layout.level_count(p));
  const Design inner = construct_d0(FactorLayout(levels));
  Design d{layout, {}};
  for (const Slide& s : inner.slides) {
    Treatment red(layout.factors()), green(layout.factors());
    for (int j = 0; j < layout.factors(); ++j) {
      red[perm[j]] = s.red[j];
      green[perm[j]] = s.green[j];
    }
    d.slides.push_back({red, green});
  }
  return d;
}

void print_search_result(const SearchResult& r, bool json) {
  if (json) {
    std::cout << search_result_to_json(r).dump() << "\n";
    return;
  }
  std::cout << "criterion: " << human(r.criterion) << "\n"
            << "design: " << r.design.str() << "\n"
            << "optima_count: " << r.optima_count << "\n";
}

struct SearchArgs {
  std::string layout;
  int slides = 0;
  std::string model = "plain";
  std::string hetero;
  std::string weights = "1";
  std::string restrict_arg;
  bool admissible = false;
  bool optima = false;
  int jobs = 0;
  bool json = false;
};

void add_search_flags(CLI::App* cmd, SearchArgs& a, bool with_restrict) {
  cmd->add_option("--layout", a.layout, "factor levels, e.g. 2x3")->required();
  cmd->add_option("--slides", a.slides, "number of slides")->required();
  cmd->add_option("--model", a.model, "plain, dye or dye-reduced");
  cmd->add_option("--hetero", a.hetero, "per-treatment variance list, t=value,...");
  cmd->add_option("--w", a.weights, "interaction weight, or effect=weight,... list");
  if (with_restrict) {
    cmd->add_option("--restrict", a.restrict_arg, "dbar, or a design file as slide alphabet");
    cmd->add_flag("--admissible", a.admissible, "list admissible designs instead");
    cmd->add_flag("--optima", a.optima, "collect every optimal design");
  }
  cmd->add_option("--jobs", a.jobs, "worker count (default env BASELINE_ODX_JOBS or 1)");
  cmd->add_flag("--json", a.json, "machine output");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"baseline factorial designs for two-color microarrays"};
  app.require_subcommand(1);

  auto* construct = app.add_subcommand("construct", "emit a constructed design as JSON");
  struct {
    std::string layout, kind, permute;
    int n = 0, phi = 0;
  } con;
  construct->add_option("--layout", con.layout, "factor levels, e.g. 2x2x3")->required();
  construct
      ->add_option("--kind", con.kind,
                   "d0, collection, dswap, dbar, reference, symmetric, egd2x3 or family")
      ->required();
  construct->add_option("--N", con.n, "slides for --kind family");
  construct->add_option("--phi", con.phi, "interaction-pair count for --kind family");
  construct->add_option("--permute", con.permute, "factor order for d0/dswap, e.g. 2,1,3");
  construct->callback([&con] {
    const FactorLayout layout = FactorLayout::parse(con.layout);
    const auto base_d0 = [&] {
      return con.permute.empty()
                 ? construct_d0(layout)
                 : permuted_d0(layout, parse_permutation(con.permute, layout.factors()));
    };
    if (con.kind == "collection") {
      nlohmann::json arr = nlohmann::json::array();
      for (const Design& d : d0_collection(layout)) arr.push_back(design_to_json(d));
      std::cout << arr.dump() << "\n";
      return;
    }
    Design d;
    if (con.kind == "d0")
      d = base_d0();
    else if (con.kind == "dswap")
      d = dye_swap(base_d0());
    else if (con.kind == "dbar")
      d = construct_dbar(layout);
    else if (con.kind == "reference")
      d = construct_reference(layout);
    else if (con.kind == "symmetric")
      d = construct_symmetric(layout);
    else if (con.kind == "egd2x3")
      d = construct_egd_2x3();
    else if (con.kind == "family")
      d = family_phi(con.n, con.phi);
    else
      throw std::invalid_argument("unknown kind " + con.kind);
    std::cout << design_to_json(d).dump() << "\n";
  });

  auto* evaluate = app.add_subcommand("evaluate", "variance report and criterion of a design");
  struct {
    std::string design, model = "plain", hetero, replication, ratio, weights;
    bool json = false;
  } ev;
  evaluate->add_option("--design", ev.design, "design JSON file")->required();
  evaluate->add_option("--model", ev.model, "plain, dye or dye-reduced");
  evaluate->add_option("--hetero", ev.hetero, "per-treatment variance list, t=value,...");
  evaluate->add_option("--replication", ev.replication, "subject plan JSON file");
  evaluate->add_option("--ratio", ev.ratio, "subject-to-error variance ratio, p/q");
  evaluate->add_option("--weights", ev.weights, "interaction weight, or effect=weight,... list");
  evaluate->add_flag("--json", ev.json, "machine output");
  evaluate->callback([&ev] {
    const Design d = design_from_json(read_json_file(ev.design));
    const ModelSpec m = parse_model(d.layout, ev.model, ev.hetero, ev.replication, ev.ratio);
    const VarianceReport report = variance_report(d, m);
    if (ev.json) {
      nlohmann::json vars = nlohmann::json::object();
      const auto effects = all_effects(d.layout);
      for (std::size_t e = 0; e < effects.size(); ++e)
        vars[effects[e].str()] = report.variances[e].str();
      nlohmann::json out = {{"design", design_to_json(d)}, {"variances", vars}};
      if (!ev.weights.empty())
        out["criterion"] =
            criterion_value(d, m, parse_weights(d.layout, ev.weights)).str();
      std::cout << out.dump() << "\n";
    } else {
      std::cout << report.to_csv();
      if (!ev.weights.empty())
        std::cout << "criterion: "
                  << human(criterion_value(d, m, parse_weights(d.layout, ev.weights))) << "\n";
    }
  });

  auto* search = app.add_subcommand("search", "exhaustive optimal or admissible designs");
  SearchArgs se;
  add_search_flags(search, se, true);
  search->callback([&se] {
    const FactorLayout layout = FactorLayout::parse(se.layout);
    const ModelSpec m = parse_model(layout, se.model, se.hetero, "", "");
    SearchOptions opts;
    opts.jobs = resolve_jobs(se.jobs);
    opts.collect_optima = se.optima;
    if (se.restrict_arg == "dbar")
      opts.restrict_to = canonicalize(construct_dbar(layout)).slides;
    else if (!se.restrict_arg.empty())
      opts.restrict_to = design_from_json(read_json_file(se.restrict_arg)).slides;
    if (se.admissible) {
      const auto designs = pareto_admissible(layout, se.slides, m, opts);
      if (se.json) {
        nlohmann::json arr = nlohmann::json::array();
        for (const Design& d : designs) arr.push_back(design_to_json(d));
        std::cout << arr.dump() << "\n";
      } else {
        for (const Design& d : designs) std::cout << d.str() << "\n";
      }
      return;
    }
    const CriterionWeights w = parse_weights(layout, se.weights);
    print_search_result(exhaustive_w_optimal(layout, se.slides, m, w, opts), se.json);
  });

  auto* augment = app.add_subcommand("augment", "best augmentation of the saturated bases");
  SearchArgs au;
  add_search_flags(augment, au, false);
  augment->callback([&au] {
    const FactorLayout layout = FactorLayout::parse(au.layout);
    const ModelSpec m = parse_model(layout, au.model, au.hetero, "", "");
    const CriterionWeights w = parse_weights(layout, au.weights);
    print_search_result(augment_optimal(layout, au.slides, m, w), au.json);
  });

  auto* approx = app.add_subcommand("approx", "optimal design measures and efficiencies");
  struct {
    std::string layout, model = "plain", hetero, weights = "1", par = "baseline";
    std::string efficiency_of;
    int round = 0;
    double tol = 1e-10;
    unsigned seed = 0;
    bool json = false;
  } ap;
  approx->add_option("--layout", ap.layout, "factor levels, e.g. 2x2")->required();
  approx->add_option("--model", ap.model, "plain, dye or dye-reduced");
  approx->add_option("--hetero", ap.hetero, "per-treatment variance list, t=value,...");
  approx->add_option("--w", ap.weights, "interaction weight, or effect=weight,... list");
  approx->add_option("--parametrization", ap.par, "baseline or orthogonal");
  approx->add_option("--round", ap.round, "also round the measure to this many slides");
  approx->add_option("--efficiency-of", ap.efficiency_of,
                     "design or measure JSON file to rate against the optimum");
  approx->add_option("--tol", ap.tol, "certificate tolerance");
  approx->add_option("--seed", ap.seed, "restart seed offset");
  approx->add_flag("--json", ap.json, "machine output");
  approx->callback([&ap] {
    const FactorLayout layout = FactorLayout::parse(ap.layout);
    const ModelSpec m = parse_model(layout, ap.model, ap.hetero, "", "");
    const CriterionWeights w = parse_weights(layout, ap.weights);
    Parametrization par;
    if (ap.par == "baseline")
      par = Parametrization::Baseline;
    else if (ap.par == "orthogonal")
      par = Parametrization::Orthogonal;
    else
      throw std::invalid_argument("unknown parametrization " + ap.par);

    if (!ap.efficiency_of.empty()) {
      const nlohmann::json j = read_json_file(ap.efficiency_of);
      const double eff = j.contains("mass")
                             ? efficiency(measure_from_json(j), m, w, par)
                             : efficiency(design_from_json(j), m, w, par);
      if (ap.json)
        std::cout << nlohmann::json{{"efficiency_percent", eff}}.dump() << "\n";
      else
        std::cout << "efficiency: " << eff << "%\n";
      return;
    }

    const DesignMeasure opt = optimize_measure(layout, m, w, par, ap.tol, ap.seed);
    const double value = measure_criterion(opt, m, w, par);
    nlohmann::json out = {{"measure", measure_to_json(opt)}, {"criterion", value}};
    if (ap.round > 0) out["design"] = design_to_json(round_measure(opt, ap.round));
    if (ap.json) {
      std::cout << out.dump() << "\n";
    } else {
      std::cout << measure_to_json(opt).dump() << "\n"
                << "criterion: " << value << "\n";
      if (ap.round > 0)
        std::cout << "rounded: " << round_measure(opt, ap.round).str() << "\n";
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  } catch (const NotEstimable& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NoConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
