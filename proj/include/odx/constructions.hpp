#pragma once

#include <stdexcept>
#include <vector>

#include "odx/factorial.hpp"

namespace odx {

// Zeroes the first nonzero component. Throws on the all-zero treatment.
Treatment rho(const Treatment& t);

// The saturated design {(t, rho(t)) : t nonzero}, one slide per nonzero
// treatment in lexicographic order; its slide graph is a spanning tree.
Design construct_d0(const FactorLayout& layout);

// For two factors: all 2^{(s1-1)(s2-1)} designs pairing each treatment with
// both coordinates nonzero against either its first or its second coordinate
// zeroed. For three or more factors: the construct_d0 of every factor
// permutation mapped back to the original factor order, duplicates removed.
std::vector<Design> d0_collection(const FactorLayout& layout);

// Both dye orders of every slide, with multiplicity.
Design dye_swap(const Design& d);

// Two factors only: the union of the d0_collection members as a set of
// slides, v-1+(s1-1)(s2-1) in total.
Design construct_dbar(const FactorLayout& layout);

// Every nonzero treatment against the all-zero baseline.
Design construct_reference(const FactorLayout& layout);

// Every unordered treatment pair on one slide, v(v-1)/2 in total.
Design construct_symmetric(const FactorLayout& layout);

// True iff the multiplicity of every unordered treatment pair depends only
// on which factors the two treatments agree on. Dye order is ignored.
bool is_egd(const Design& d);

// The 6-slide 2x3 design whose pair multiplicities are 1 exactly on the
// pairs differing in both factors.
Design construct_egd_2x3();

// The 2x2 frequency family (N/2-phi, N/2-phi, 0, 0, phi, phi) over
// slide_kinds_2x2. Requires N even and 0 <= phi <= N/2.
Design family_phi(int n_slides, int phi);

class OddDegree : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Reassigns dye orders so every treatment is red exactly as often as green.
// A design that is already balanced is returned with its slide list sorted
// and each orientation kept; otherwise each connected component of the slide
// graph is oriented along an Eulerian circuit with lexicographic tie-breaks.
// Throws OddDegree when some treatment appears an odd number of times.
Design orient_even_design(const Design& d);

}  // namespace odx
