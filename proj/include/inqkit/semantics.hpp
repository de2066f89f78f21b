#pragma once

#include "inqkit/formula.hpp"
#include "inqkit/model.hpp"

#include <memory>
#include <stdexcept>

namespace inqkit {

class SignatureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct EvalOptions {
    // Evaluate flat implications world by world instead of over all substates.
    bool flat_shortcut = true;
    // Check modal clauses on maximal states only; sound by persistency.
    bool maximal_only = true;
};

// Support evaluation for one (model, formula) pair.  Subformula results are
// memoized per state for the lifetime of the object.
class SupportEvaluator {
public:
    SupportEvaluator(const InqModel& m, const Formula& f, EvalOptions opts = {});
    ~SupportEvaluator();
    SupportEvaluator(SupportEvaluator&&) noexcept;

    bool supports(InfoState s);
    bool truth(std::size_t world) { return supports(InfoState::singleton(world)); }
    // Every state of the model that supports the formula, ascending.
    std::vector<InfoState> support_set();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

bool supports(const InqModel& m, InfoState s, const Formula& f, EvalOptions opts = {});
bool truth(const InqModel& m, std::size_t world, const Formula& f, EvalOptions opts = {});

inline constexpr std::size_t truth_conditional_world_cap = 12;

bool is_truth_conditional(const InqModel& m, const Formula& f);

// Classical Kripke semantics; rejects ⫾ and ⊞.
bool kripke_truth(const KripkeModel& k, std::size_t world, const Formula& f);

}   // namespace inqkit
