#pragma once

// Fixtures, random generators and brute-force oracles shared by the unit
// tests and the acceptance runner.  The oracles follow the definitions
// directly and share no code with the library's evaluators.

#include "inqkit/formula.hpp"
#include "inqkit/model.hpp"
#include "inqkit/model_io.hpp"

#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#ifndef INQKIT_TEST_DATA
#define INQKIT_TEST_DATA "tests/data"
#endif

namespace inqkit::testing {

inline std::string data_path(const std::string& file) { return std::string(INQKIT_TEST_DATA) + "/" + file; }

inline InqModel load(const std::string& file) { return std::get<InqModel>(read_model_file(data_path(file)).model); }

inline InqModel ex1() { return load("ex1.model"); }
inline InqModel m1() { return load("m1.model"); }
inline InqModel m2() { return load("m2.model"); }

using Rng = std::mt19937_64;

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi)
{
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

inline InfoState random_subset(Rng& rng, InfoState of, double p = 0.5)
{
    InfoState s;
    of.for_each([&](std::size_t w) {
        if (coin(rng, p)) s.insert(w);
    });
    return s;
}

inline std::vector<std::string> names(const std::string& prefix, std::size_t n)
{
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

inline std::vector<InfoState> random_valuation(Rng& rng, std::size_t worlds, std::size_t atoms)
{
    std::vector<InfoState> val;
    for (std::size_t p = 0; p < atoms; ++p) val.push_back(random_subset(rng, InfoState::full(worlds)));
    return val;
}

// Arbitrary (not necessarily S5) model.
inline InqModel random_model(Rng& rng, std::size_t worlds, std::size_t atoms, std::size_t agents = 1)
{
    std::vector<std::vector<InqState>> sigma(agents, std::vector<InqState>(worlds));
    for (auto& row : sigma) {
        for (auto& st : row) {
            if (coin(rng, 0.1)) continue;
            std::vector<InfoState> gens;
            std::size_t k = uniform(rng, 1, 3);
            for (std::size_t i = 0; i < k; ++i) gens.push_back(random_subset(rng, InfoState::full(worlds)));
            st = InqState::from_generators(gens);
        }
    }
    return InqModel(names("w", worlds), names("a", agents), names("p", atoms), std::move(sigma),
                    random_valuation(rng, worlds, atoms));
}

// Every agent partitions the worlds; Sigma is constant on each class and
// its maximal states cover the class.
inline InqModel random_s5_model(Rng& rng, std::size_t worlds, std::size_t atoms, std::size_t agents = 1)
{
    std::vector<std::vector<InqState>> sigma(agents, std::vector<InqState>(worlds));
    for (auto& row : sigma) {
        std::vector<std::size_t> label(worlds);
        for (auto& l : label) l = uniform(rng, 0, worlds - 1);
        std::map<std::size_t, InfoState> classes;
        for (std::size_t w = 0; w < worlds; ++w) classes[label[w]].insert(w);
        for (const auto& [_, cls] : classes) {
            std::size_t k = uniform(rng, 1, 3);
            std::vector<InfoState> gens;
            for (std::size_t i = 0; i < k; ++i) gens.push_back(random_subset(rng, cls));
            cls.for_each([&](std::size_t w) { gens[uniform(rng, 0, k - 1)].insert(w); });
            InqState st = InqState::from_generators(gens);
            cls.for_each([&](std::size_t w) { row[w] = st; });
        }
    }
    return InqModel(names("w", worlds), names("a", agents), names("p", atoms), std::move(sigma),
                    random_valuation(rng, worlds, atoms));
}

struct FormulaShape {
    std::vector<std::string> atoms;
    std::vector<std::string> agents;
    bool idisj = true;
    bool box = true;
    bool boxplus = true;
};

inline Formula random_formula(Rng& rng, const FormulaShape& shape, std::size_t depth, std::size_t size = 4)
{
    if (size == 0 || coin(rng, 0.25)) {
        if (coin(rng, 0.1)) return bottom();
        return atom(shape.atoms[uniform(rng, 0, shape.atoms.size() - 1)]);
    }
    std::vector<int> ops = {0, 1, 5};   // conj, implies, neg
    if (shape.idisj) ops.push_back(2);
    if (depth > 0 && shape.box) ops.push_back(3);
    if (depth > 0 && shape.boxplus) ops.push_back(4);
    int op = ops[uniform(rng, 0, ops.size() - 1)];
    const std::string& ag = shape.agents[uniform(rng, 0, shape.agents.size() - 1)];
    switch (op) {
    case 0: return conj(random_formula(rng, shape, depth, size - 1), random_formula(rng, shape, depth, size - 1));
    case 1: return implies(random_formula(rng, shape, depth, size - 1), random_formula(rng, shape, depth, size - 1));
    case 2: return idisj(random_formula(rng, shape, depth, size - 1), random_formula(rng, shape, depth, size - 1));
    case 3: return box(ag, random_formula(rng, shape, depth - 1, size - 1));
    case 4: return boxplus(ag, random_formula(rng, shape, depth - 1, size - 1));
    default: return neg(random_formula(rng, shape, depth, size - 1));
    }
}

// Support by the clauses, enumerating every substate and every member of Sigma.
inline bool oracle_supports(const InqModel& m, InfoState s, const Formula& f)
{
    switch (f.kind()) {
    case FormulaKind::atom: {
        InfoState v = m.valuation(*m.find_atom(f.name()));
        return (s.bits() & ~v.bits()) == 0;
    }
    case FormulaKind::bottom: return s.bits() == 0;
    case FormulaKind::conj: return oracle_supports(m, s, f.left()) && oracle_supports(m, s, f.right());
    case FormulaKind::idisj: return oracle_supports(m, s, f.left()) || oracle_supports(m, s, f.right());
    case FormulaKind::implies: {
        const std::uint64_t all = s.bits();
        for (std::uint64_t t = 0;; t = (t - all) & all) {
            if (oracle_supports(m, InfoState(t), f.left()) && !oracle_supports(m, InfoState(t), f.right())) return false;
            if (t == all) return true;
        }
    }
    case FormulaKind::box:
    case FormulaKind::boxplus: {
        std::size_t a = *m.find_agent(f.name());
        for (std::size_t w = 0; w < m.world_count(); ++w) {
            if (!s.contains(w)) continue;
            const InqState& st = m.sigma(a, w);
            if (f.kind() == FormulaKind::box) {
                InfoState u;
                for (InfoState x : st.maximal()) u = u | x;
                if (!oracle_supports(m, u, f.body())) return false;
            } else {
                for (InfoState t : st.members())
                    if (!oracle_supports(m, t, f.body())) return false;
            }
        }
        return true;
    }
    }
    return false;
}

// Player II's winning positions in the k-round game, by direct search over
// every member of every Sigma and every answer.
class GameOracle {
public:
    GameOracle(const InqModel& l, const InqModel& r) : l_(l), r_(r) {}

    bool worlds(std::size_t a, std::size_t b, std::size_t k)
    {
        auto key = std::make_tuple(a, b, k);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        bool win = atoms_agree(a, b);
        if (win && k > 0) {
            for (std::size_t ag = 0; ag < l_.agent_count() && win; ++ag) {
                std::size_t rag = *r_.find_agent(l_.agents()[ag]);
                const auto ls = l_.sigma(ag, a).members();
                const auto rs = r_.sigma(rag, b).members();
                for (InfoState s : ls) {
                    bool answered = false;
                    for (InfoState t : rs) answered = answered || states(s, t, k - 1);
                    win = win && answered;
                }
                for (InfoState t : rs) {
                    bool answered = false;
                    for (InfoState s : ls) answered = answered || states(s, t, k - 1);
                    win = win && answered;
                }
            }
        }
        memo_[key] = win;
        return win;
    }

    bool states(InfoState s, InfoState t, std::size_t k)
    {
        bool ok = true;
        s.for_each([&](std::size_t u) {
            bool found = false;
            t.for_each([&](std::size_t x) { found = found || worlds(u, x, k); });
            ok = ok && found;
        });
        t.for_each([&](std::size_t x) {
            bool found = false;
            s.for_each([&](std::size_t u) { found = found || worlds(u, x, k); });
            ok = ok && found;
        });
        return ok;
    }

private:
    bool atoms_agree(std::size_t a, std::size_t b) const
    {
        for (std::size_t p = 0; p < l_.atom_count(); ++p) {
            auto rp = r_.find_atom(l_.atoms()[p]);
            bool rv = rp && r_.holds(*rp, b);
            if (l_.holds(p, a) != rv) return false;
        }
        for (std::size_t p = 0; p < r_.atom_count(); ++p)
            if (!l_.find_atom(r_.atoms()[p]) && r_.holds(p, b)) return false;
        return true;
    }

    const InqModel& l_;
    const InqModel& r_;
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, bool> memo_;
};

// Closes {P_i}, ∅ and U under complement, union and intersection for `depth`
// rounds, carrying each term's value in both universes at once, and compares
// every term's sizes up to d.
inline bool threshold_terms_oracle(std::size_t u1, const std::vector<InfoState>& p, std::size_t u2,
                                   const std::vector<InfoState>& q, std::size_t d, std::size_t depth = 3)
{
    using Term = std::pair<std::uint64_t, std::uint64_t>;
    const std::uint64_t f1 = InfoState::full(u1).bits(), f2 = InfoState::full(u2).bits();
    std::set<Term> terms{{0, 0}, {f1, f2}};
    for (std::size_t i = 0; i < p.size(); ++i) terms.insert({p[i].bits(), q[i].bits()});
    for (std::size_t r = 0; r < depth; ++r) {
        std::set<Term> next = terms;
        for (const Term& x : terms) {
            next.insert({f1 & ~x.first, f2 & ~x.second});
            for (const Term& y : terms) {
                next.insert({x.first | y.first, x.second | y.second});
                next.insert({x.first & y.first, x.second & y.second});
            }
        }
        terms = std::move(next);
    }
    for (const Term& t : terms) {
        std::size_t a = InfoState(t.first).size(), b = InfoState(t.second).size();
        if (a != b && (a < d || b < d)) return false;
    }
    return true;
}

}   // namespace inqkit::testing
