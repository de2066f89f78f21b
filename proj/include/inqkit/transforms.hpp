#pragma once

#include "inqkit/bisim.hpp"
#include "inqkit/model.hpp"
#include "inqkit/relational.hpp"
#include "inqkit/report.hpp"

#include <optional>
#include <vector>

namespace inqkit {

// minimal: S_n is the union of the E-images of the stage.  locally_full: every
// state below some σ_a(u) of the stage.
enum class StratifyPolicy { minimal, locally_full };

struct StratifyOptions {
    // Even and nonzero; empty for the untruncated unfolding.
    std::optional<std::size_t> depth = 2;
    StratifyPolicy policy = StratifyPolicy::minimal;
    // World budget of the untruncated unfolding.
    std::size_t budget = 64;
};

struct Stratified {
    RelationalModel model;
    Point point;
    std::vector<std::size_t> origin;   // output world -> input world
    std::vector<std::size_t> stage;    // output world -> stratum; glued worlds get unglued
};

inline constexpr std::size_t unglued = static_cast<std::size_t>(-1);

// Partial unfolding into tagged strata.  A world point starts from
// W'_0 = {(w,0)}, a state point from S'_0 = ℘(s); at depth ℓ one shared copy of
// the input is glued in as the stratum after the last tagged one.  Tagged
// labels are <label>@<stage>.
Stratified stratify(const RelationalModel& m, const Point& point, StratifyOptions opts = {});

// The point is stratified to depth ℓ: its ℓ-neighbourhood (ℓ+1 for a state),
// measured with empty states skipped, splits into strata as required.
Report check_stratified(const Structure& s, const Point& point, std::size_t l);

struct Covering {
    InqModel source;
    InqModel target;
    std::vector<std::size_t> projection;   // target world -> source world
};

// M × [K], worlds labelled <label>.<copy> with copies 1..K.
Covering rich_cover(const InqModel& m, std::size_t k);

// Surjectivity, the valuation and Σ squares, and back and forth for the graph
// of the projection.
Report verify_covering(const Covering& c);

// Replaces every maximal state by its colour saturation within its class.
// Colours are full bisimilarity classes unless a finite granularity is given.
InqModel simplify(const InqModel& m, Depth granularity = Depth::full());

std::string stratify_policy_name(StratifyPolicy p);
StratifyPolicy parse_stratify_policy(const std::string& s);

}   // namespace inqkit
