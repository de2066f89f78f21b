#pragma once

#include "inqkit/formula.hpp"
#include "inqkit/relational.hpp"

#include <compare>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace inqkit {

enum class Sort { world, state };

struct Var {
    std::string name;
    Sort sort = Sort::world;
    auto operator<=>(const Var&) const = default;
};

// subset and emap are the two defined predicates s⊆t and e_a(w,t); they stay
// in the tree for printing and are expanded before evaluation.
enum class FOKind { truth, falsum, pred, edge, member, eq, neg, conj, disj, implies, iff, forall, exists, subset, emap };

struct FONode;

class FOFormula {
public:
    FOFormula() = default;
    explicit FOFormula(std::shared_ptr<const FONode> n) : n_(std::move(n)) {}

    FOKind kind() const;
    const FONode& node() const { return *n_; }
    const FONode* ptr() const { return n_.get(); }
    bool valid() const { return n_ != nullptr; }

private:
    std::shared_ptr<const FONode> n_;
};

struct FONode {
    FOKind kind;
    std::string name;        // atom for pred, agent for edge and emap
    std::vector<Var> args;   // atomic arguments, or the bound variable of a quantifier
    FOFormula left, right;   // right is unused by neg and quantifiers
};

class FOError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace fo {
FOFormula truth();
FOFormula falsum();
FOFormula pred(const std::string& atom, const Var& w);
FOFormula edge(const std::string& agent, const Var& w, const Var& s);
FOFormula member(const Var& w, const Var& s);
FOFormula eq(const Var& x, const Var& y);
FOFormula neg(const FOFormula& f);
FOFormula conj(const FOFormula& a, const FOFormula& b);
FOFormula disj(const FOFormula& a, const FOFormula& b);
FOFormula implies(const FOFormula& a, const FOFormula& b);
FOFormula iff(const FOFormula& a, const FOFormula& b);
FOFormula forall(const Var& v, const FOFormula& body);
FOFormula exists(const Var& v, const FOFormula& body);
FOFormula subset(const Var& s, const Var& t);
FOFormula emap(const std::string& agent, const Var& w, const Var& t);
}   // namespace fo

// Replaces s⊆t and e_a(w,t) by their definitions, picking bound variables
// that cannot capture the arguments.
FOFormula expand_macros(const FOFormula& f);
std::set<Var> free_variables(const FOFormula& f);
// Counted after macro expansion.
std::size_t quantifier_rank(const FOFormula& f);
bool structurally_equal(const FOFormula& a, const FOFormula& b);

// S-expression text, e.g. (forall (s S) (-> (E a w s) (P p w))).
std::string to_sexpr(const FOFormula& f);
FOFormula parse_fo(const std::string& text);

enum class TranslationMode { world, state };

// One free variable: w in world mode, s in state mode.
FOFormula standard_translate(const Formula& phi, TranslationMode mode);

// Free variable name -> element index in the sort the formula gives it.
using Assignment = std::map<std::string, std::size_t>;

// Tarskian evaluation with per-node memo tables keyed on the node's free
// variables, so repeated queries against one structure are cheap.
class FOEvaluator {
public:
    FOEvaluator(const Structure& s, const FOFormula& f);
    ~FOEvaluator();
    bool eval(const Assignment& a);
    const std::set<Var>& free() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

bool fo_eval(const Structure& s, const FOFormula& f, const Assignment& a);

struct Element {
    Sort sort = Sort::world;
    std::size_t index = 0;
    auto operator<=>(const Element&) const = default;
};

struct EFOptions {
    std::size_t element_cap = 40;
    std::size_t round_cap = 3;
};

// Duplicator wins the q-round two-sorted Ehrenfeucht–Fraïssé game from (ā; b̄).
// Predicates are matched by name; one missing on a side is read as empty there.
bool fo_ef_equiv(const Structure& a, const std::vector<Element>& at, const Structure& b,
                 const std::vector<Element>& bt, std::size_t q, EFOptions opts = {});

// plain: graph distance over symmetrised E_a ∪ ε.  skip_empty: distance in the
// structure with empty-extension states removed.  Those states still get a
// distance (one more than their nearest world) but relay nothing.
enum class DistanceMode { plain, skip_empty };

inline constexpr std::size_t unreachable = static_cast<std::size_t>(-1);

// Worlds first, then states; unreachable for elements out of reach.
std::vector<std::size_t> gaifman_distances(const Structure& s, Element from, DistanceMode mode = DistanceMode::plain);

struct Neighbourhood {
    Structure structure;
    Element centre;
    std::vector<std::size_t> worlds;   // original indices of kept worlds
    std::vector<std::size_t> states;   // original indices of kept states
};

Neighbourhood neighbourhood(const Structure& s, Element x, std::size_t l, DistanceMode mode = DistanceMode::plain);
// For relational input and even nonzero ℓ, the restriction is checked as a relational model.
Report check_neighbourhood(const Neighbourhood& n, std::size_t l);

std::string distance_mode_name(DistanceMode m);

}   // namespace inqkit
