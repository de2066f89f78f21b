#pragma once

#include "inqkit/bisim.hpp"
#include "inqkit/model.hpp"
#include "inqkit/report.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace inqkit {

// Factivity (w ∈ σ_a(w)) and introspection (Σ_a constant on σ_a(w)) for every agent.
Report check_s5(const InqModel& m);

// The R_a-class of w; throws ModelError when m is not S5.
InfoState a_class(const InqModel& m, std::size_t agent, std::size_t w);
// Distinct a-classes in order of their least world.
std::vector<InfoState> a_classes(const InqModel& m, std::size_t agent);

struct LocalAStructure {
    InfoState carrier;
    InqState inqstate;
    std::map<std::size_t, std::size_t> colouring;   // world -> colour (class id in the ambient model)
};

LocalAStructure local_a_structure(const InqModel& m, std::size_t agent, std::size_t w, Depth granularity = Depth::full());

// Colours of the worlds of s under a colouring, as a bit set of colour ids.
std::uint64_t colour_set(InfoState s, const std::vector<std::size_t>& colour);
// Union of the colour classes met by s, within the carrier.
InfoState saturate(InfoState s, InfoState carrier, const std::vector<std::size_t>& colour);

// Every member s of Σ_a(w) lies in some s' ∈ Σ_a(w) meeting each full-bisimilarity
// class in zero or at least K worlds.
Report check_k_rich(const InqModel& m, std::size_t k);
// Every maximal state of every Σ_a(w) is a union of full-bisimilarity classes
// within [w]_a.
Report check_simple(const InqModel& m);
// Classes of distinct agents share at most one world and the incidence graph of
// worlds and classes has no cycle through N or fewer classes.
Report check_n_acyclic(const InqModel& m, std::size_t n);

// A tuple of subsets of one finite universe (at most 64 elements).
struct SetTuple {
    std::size_t universe = 0;
    std::vector<InfoState> sets;
};

// |P| =_d |P'|: equal, or both at least d.
bool threshold_equal(std::size_t a, std::size_t b, std::size_t d);

// Every boolean combination of the sets has =_d-matching sizes; decided on the
// 2^k cells of the generated algebras.
bool threshold_equiv(const SetTuple& p, const SetTuple& q, std::size_t d);

}   // namespace inqkit
