#include "odx/constructions.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>

namespace odx {

Treatment rho(const Treatment& t) {
  Treatment out = t;
  for (int& c : out)
    if (c != 0) {
      c = 0;
      return out;
    }
  throw std::invalid_argument("rho is undefined for the all-zero treatment");
}

Design construct_d0(const FactorLayout& layout) {
  Design d{layout, {}};
  for (const Treatment& t : enumerate_treatments(layout)) {
    if (treatment_index(layout, t) == 0) continue;
    d.slides.push_back({t, rho(t)});
  }
  return d;
}

namespace {

// Applies a factor permutation: component k of the result is component
// perm[k] of the input.
Treatment permute_treatment(const Treatment& t, const std::vector<int>& perm) {
  Treatment out(t.size());
  for (std::size_t k = 0; k < perm.size(); ++k) out[k] = t[perm[k]];
  return out;
}

}  // namespace

std::vector<Design> d0_collection(const FactorLayout& layout) {
  std::vector<Design> out;
  if (layout.factors() == 2) {
    // Treatments with both coordinates nonzero, in lexicographic order; each
    // independently pairs with either coordinate zeroed.
    std::vector<Treatment> cells;
    for (const Treatment& t : enumerate_treatments(layout))
      if (t[0] != 0 && t[1] != 0) cells.push_back(t);
    const std::size_t m = cells.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
      Design d{layout, {}};
      for (const Treatment& t : enumerate_treatments(layout)) {
        if (treatment_index(layout, t) == 0) continue;
        if (t[0] == 0 || t[1] == 0) {
          d.slides.push_back({t, Treatment(t.size(), 0)});
        } else {
          const std::size_t cell =
              std::lower_bound(cells.begin(), cells.end(), t) - cells.begin();
          Treatment green = t;
          green[(mask >> cell) & 1 ? 1 : 0] = 0;
          d.slides.push_back({t, green});
        }
      }
      out.push_back(std::move(d));
    }
    return out;
  }

  std::vector<int> perm(layout.factors());
  std::iota(perm.begin(), perm.end(), 0);
  std::set<std::string> seen;
  do {
    std::vector<int> permuted_levels(layout.factors());
    for (int k = 0; k < layout.factors(); ++k) permuted_levels[k] = layout.level_count(perm[k]);
    const Design base = construct_d0(FactorLayout(permuted_levels));

    // Undo the permutation on every treatment: position perm[k] of the
    // original took position k in the permuted layout.
    std::vector<int> inverse(layout.factors());
    for (int k = 0; k < layout.factors(); ++k) inverse[perm[k]] = k;
    Design mapped{layout, {}};
    for (const Slide& s : base.slides)
      mapped.slides.push_back({permute_treatment(s.red, inverse), permute_treatment(s.green, inverse)});

    const std::string key = canonicalize(mapped).str();
    if (seen.insert(key).second) out.push_back(std::move(mapped));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

Design dye_swap(const Design& d) {
  Design out{d.layout, {}};
  for (const Slide& s : d.slides) {
    out.slides.push_back(s);
    out.slides.push_back({s.green, s.red});
  }
  return out;
}

Design construct_dbar(const FactorLayout& layout) {
  if (layout.factors() != 2)
    throw std::invalid_argument("the pooled saturated design is defined for two factors");
  Design d{layout, {}};
  for (const Treatment& t : enumerate_treatments(layout)) {
    if (t[0] != 0) {
      Treatment green = t;
      green[0] = 0;
      d.slides.push_back({t, green});
    }
    if (t[1] != 0) {
      Treatment green = t;
      green[1] = 0;
      d.slides.push_back({t, green});
    }
  }
  return d;
}

Design construct_reference(const FactorLayout& layout) {
  Design d{layout, {}};
  const Treatment zero(layout.factors(), 0);
  for (const Treatment& t : enumerate_treatments(layout)) {
    if (treatment_index(layout, t) == 0) continue;
    d.slides.push_back({t, zero});
  }
  return d;
}

Design construct_symmetric(const FactorLayout& layout) {
  Design d{layout, {}};
  const auto treatments = enumerate_treatments(layout);
  for (std::size_t i = 0; i < treatments.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) d.slides.push_back({treatments[i], treatments[j]});
  return d;
}

bool is_egd(const Design& d) {
  validate_design(d);
  const auto treatments = enumerate_treatments(d.layout);
  const int v = d.layout.treatment_count();
  std::map<std::pair<int, int>, int> multiplicity;
  for (const Slide& s : d.slides) {
    int a = treatment_index(d.layout, s.red);
    int b = treatment_index(d.layout, s.green);
    if (a > b) std::swap(a, b);
    ++multiplicity[{a, b}];
  }
  // Group all unordered pairs by their coordinatewise equality pattern and
  // require one multiplicity per group.
  std::map<std::vector<bool>, int> group_value;
  for (int a = 0; a < v; ++a)
    for (int b = a + 1; b < v; ++b) {
      std::vector<bool> pattern(d.layout.factors());
      for (int k = 0; k < d.layout.factors(); ++k)
        pattern[k] = treatments[a][k] == treatments[b][k];
      const auto it = multiplicity.find({a, b});
      const int count = it == multiplicity.end() ? 0 : it->second;
      const auto [pos, inserted] = group_value.emplace(pattern, count);
      if (!inserted && pos->second != count) return false;
    }
  return true;
}

Design construct_egd_2x3() {
  const FactorLayout layout({2, 3});
  Design d{layout, {}};
  const std::vector<std::pair<std::string, std::string>> pairs = {
      {"11", "00"}, {"12", "00"}, {"10", "01"}, {"12", "01"}, {"10", "02"}, {"11", "02"}};
  for (const auto& [r, g] : pairs)
    d.slides.push_back({treatment_parse(layout, r), treatment_parse(layout, g)});
  return d;
}

Design family_phi(int n_slides, int phi) {
  if (n_slides <= 0 || n_slides % 2 != 0)
    throw std::invalid_argument("slide count must be even and positive");
  if (phi < 0 || phi > n_slides / 2) throw std::invalid_argument("phi out of range");
  return design_from_frequency_2x2(
      {n_slides / 2 - phi, n_slides / 2 - phi, 0, 0, phi, phi});
}

Design orient_even_design(const Design& d) {
  validate_design(d);
  const int v = d.layout.treatment_count();
  std::vector<int> degree(v, 0), red_count(v, 0);
  std::vector<std::pair<int, int>> edges;
  for (const Slide& s : d.slides) {
    const int a = treatment_index(d.layout, s.red);
    const int b = treatment_index(d.layout, s.green);
    edges.push_back({a, b});
    ++degree[a];
    ++degree[b];
    ++red_count[a];
  }
  for (int t = 0; t < v; ++t)
    if (degree[t] % 2 != 0)
      throw OddDegree("treatment " + treatment_str(treatment_from_index(d.layout, t)) +
                      " appears an odd number of times");

  bool balanced = true;
  for (int t = 0; t < v; ++t)
    if (2 * red_count[t] != degree[t]) {
      balanced = false;
      break;
    }
  if (balanced) return canonicalize(d, true);

  // Orient every connected component along an Eulerian circuit; equal in- and
  // out-degrees then balance each treatment's dye counts. Edge choices are by
  // smallest neighbour, then smallest edge index, for determinism.
  std::vector<std::vector<std::pair<int, int>>> adj(v);  // (neighbour, edge)
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto [a, b] = edges[e];
    adj[a].push_back({b, static_cast<int>(e)});
    adj[b].push_back({a, static_cast<int>(e)});
  }
  for (auto& lst : adj) std::sort(lst.begin(), lst.end());

  std::vector<bool> used(edges.size(), false);
  std::vector<std::size_t> next_arc(v, 0);
  Design out{d.layout, {}};
  for (int start = 0; start < v; ++start) {
    if (degree[start] == 0) continue;
    if (next_arc[start] >= adj[start].size()) continue;
    bool fresh = false;
    for (std::size_t i = next_arc[start]; i < adj[start].size(); ++i)
      if (!used[adj[start][i].second]) {
        fresh = true;
        break;
      }
    if (!fresh) continue;

    // Hierholzer: walk until stuck (which only happens back at the start),
    // then splice detours from vertices with remaining edges.
    std::vector<int> stack = {start};
    std::vector<int> circuit;
    while (!stack.empty()) {
      const int u = stack.back();
      while (next_arc[u] < adj[u].size() && used[adj[u][next_arc[u]].second]) ++next_arc[u];
      if (next_arc[u] == adj[u].size()) {
        circuit.push_back(u);
        stack.pop_back();
      } else {
        const auto [w, e] = adj[u][next_arc[u]];
        used[e] = true;
        stack.push_back(w);
      }
    }
    for (std::size_t i = 0; i + 1 < circuit.size(); ++i) {
      // The circuit comes out reversed; orienting along the reversal still
      // yields equal in- and out-degrees.
      out.slides.push_back({treatment_from_index(d.layout, circuit[i]),
                            treatment_from_index(d.layout, circuit[i + 1])});
    }
  }
  return canonicalize(out, true);
}

}  // namespace odx
