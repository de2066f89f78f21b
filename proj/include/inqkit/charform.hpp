#pragma once

#include "inqkit/formula.hpp"
#include "inqkit/model.hpp"

#include <memory>

namespace inqkit {

// How the negated ⊞-conjuncts of a level-(n+1) world formula are enumerated.
enum class PiEnumeration {
    // One conjunct per antichain of ∼ⁿ state types of Σ(w) that misses a maximal type.
    antichains,
    // One conjunct per maximal type, for Σ(w) minus that type; logically equivalent and linear.
    drop_one,
    // One conjunct per raw subfamily Π ⊆ Σ(w) that is not ∼ⁿ Σ(w); only for tiny models.
    literal,
};

struct CharformOptions {
    PiEnumeration pi = PiEnumeration::antichains;
    std::size_t depth_cap = 3;
    std::size_t antichain_cap = 200000;
    std::size_t literal_member_cap = 10;
};

// Characteristic formulae of one model up to some depth, sharing one
// hash-consed store so that ∼-equivalent points yield the same node.
class Characteriser {
public:
    Characteriser(const InqModel& m, std::size_t max_depth, CharformOptions opts = {});
    ~Characteriser();

    Formula world(std::size_t w, std::size_t n);
    Formula state(InfoState s, std::size_t n);
    Formula inqstate(const InqState& pi, std::size_t n);

    // ∼ⁿ class of a world, numbered by first occurrence.
    std::size_t world_class(std::size_t w, std::size_t n) const;
    std::size_t class_count(std::size_t n) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

Formula chi_world(const InqModel& m, std::size_t w, std::size_t n, CharformOptions opts = {});
Formula chi_state(const InqModel& m, InfoState s, std::size_t n, CharformOptions opts = {});
Formula chi_inqstate(const InqModel& m, const InqState& pi, std::size_t n, CharformOptions opts = {});

enum class ClassKind { world, state };

// Classical disjunction of world formulae, or inquisitive disjunction of state
// formulae, over the given representatives.
Formula class_formula(const InqModel& m, const std::vector<Point>& reps, std::size_t n, ClassKind kind,
                      CharformOptions opts = {});

}   // namespace inqkit
