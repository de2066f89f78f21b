#include "inqkit/formula.hpp"

#include <functional>
#include <limits>
#include <unordered_map>
#include <unordered_set>

namespace inqkit {

namespace {

std::size_t combine(std::size_t seed, std::size_t v)
{
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

Formula make_formula(FormulaKind k, const std::string& name, const Formula& l, const Formula& r)
{
    std::size_t h = combine(std::hash<int>{}(static_cast<int>(k)), std::hash<std::string>{}(name));
    if (l.valid()) h = combine(h, l.hash());
    if (r.valid()) h = combine(h, r.hash());
    return Formula(std::make_shared<const FormulaNode>(FormulaNode{k, name, l.ptr(), r.ptr(), h}));
}

struct PairHash {
    std::size_t operator()(const std::pair<const FormulaNode*, const FormulaNode*>& p) const
    {
        return combine(std::hash<const void*>{}(p.first), std::hash<const void*>{}(p.second));
    }
};
using EqualPairs = std::unordered_set<std::pair<const FormulaNode*, const FormulaNode*>, PairHash>;

// Pairs already shown equal are remembered so shared subterms are compared once.
bool equal_nodes(const FormulaNode* a, const FormulaNode* b, EqualPairs& known)
{
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->hash != b->hash || a->kind != b->kind || a->name != b->name) return false;
    if (known.count({a, b})) return true;
    bool eq = equal_nodes(a->left.get(), b->left.get(), known) && equal_nodes(a->right.get(), b->right.get(), known);
    if (eq) known.insert({a, b});
    return eq;
}

template <class Build>
Formula fold(const std::vector<Formula>& fs, Formula empty, Build build)
{
    if (fs.empty()) return empty;
    Formula acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) acc = build(acc, fs[i]);
    return acc;
}

}   // namespace

bool operator==(const Formula& a, const Formula& b)
{
    EqualPairs known;
    return equal_nodes(a.node(), b.node(), known);
}

Formula atom(const std::string& name) { return make_formula(FormulaKind::atom, name, {}, {}); }
Formula bottom() { return make_formula(FormulaKind::bottom, "", {}, {}); }
Formula conj(const Formula& a, const Formula& b) { return make_formula(FormulaKind::conj, "", a, b); }
Formula implies(const Formula& a, const Formula& b) { return make_formula(FormulaKind::implies, "", a, b); }
Formula idisj(const Formula& a, const Formula& b) { return make_formula(FormulaKind::idisj, "", a, b); }
Formula box(const std::string& agent, const Formula& f) { return make_formula(FormulaKind::box, agent, f, {}); }
Formula boxplus(const std::string& agent, const Formula& f)
{
    return make_formula(FormulaKind::boxplus, agent, f, {});
}

Formula neg(const Formula& f) { return implies(f, bottom()); }
Formula top() { return implies(bottom(), bottom()); }
Formula cdisj(const Formula& a, const Formula& b) { return neg(conj(neg(a), neg(b))); }
Formula question(const Formula& f) { return idisj(f, neg(f)); }

Formula conj_all(const std::vector<Formula>& fs) { return fold(fs, top(), conj); }
Formula cdisj_all(const std::vector<Formula>& fs) { return fold(fs, bottom(), cdisj); }
Formula idisj_all(const std::vector<Formula>& fs) { return fold(fs, bottom(), idisj); }

std::size_t FormulaStore::KeyHash::operator()(const Key& k) const
{
    std::size_t h = combine(std::hash<int>{}(static_cast<int>(k.kind)), std::hash<std::string>{}(k.name));
    h = combine(h, std::hash<const void*>{}(k.left));
    return combine(h, std::hash<const void*>{}(k.right));
}

Formula FormulaStore::make(FormulaKind k, const std::string& name, const Formula& l, const Formula& r)
{
    Key key{k, name, l.node(), r.node()};
    auto it = table_.find(key);
    if (it != table_.end()) return it->second;
    Formula f = make_formula(k, name, l, r);
    table_.emplace(key, f);
    return f;
}

Formula FormulaStore::atom(const std::string& name) { return make(FormulaKind::atom, name, {}, {}); }
Formula FormulaStore::bottom() { return make(FormulaKind::bottom, "", {}, {}); }
Formula FormulaStore::conj(const Formula& a, const Formula& b) { return make(FormulaKind::conj, "", a, b); }
Formula FormulaStore::implies(const Formula& a, const Formula& b) { return make(FormulaKind::implies, "", a, b); }
Formula FormulaStore::idisj(const Formula& a, const Formula& b) { return make(FormulaKind::idisj, "", a, b); }
Formula FormulaStore::box(const std::string& agent, const Formula& f) { return make(FormulaKind::box, agent, f, {}); }
Formula FormulaStore::boxplus(const std::string& agent, const Formula& f)
{
    return make(FormulaKind::boxplus, agent, f, {});
}

Formula FormulaStore::conj_all(const std::vector<Formula>& fs)
{
    return fold(fs, top(), [this](const Formula& a, const Formula& b) { return conj(a, b); });
}
Formula FormulaStore::cdisj_all(const std::vector<Formula>& fs)
{
    return fold(fs, bottom(), [this](const Formula& a, const Formula& b) { return cdisj(a, b); });
}
Formula FormulaStore::idisj_all(const std::vector<Formula>& fs)
{
    return fold(fs, bottom(), [this](const Formula& a, const Formula& b) { return idisj(a, b); });
}

namespace {

template <class F>
void visit_dag(const Formula& f, F&& visit)
{
    std::unordered_set<const FormulaNode*> seen;
    std::vector<const FormulaNode*> stack{f.node()};
    while (!stack.empty()) {
        const FormulaNode* n = stack.back();
        stack.pop_back();
        if (!n || !seen.insert(n).second) continue;
        visit(*n);
        stack.push_back(n->left.get());
        stack.push_back(n->right.get());
    }
}

}   // namespace

std::size_t modal_depth(const Formula& f)
{
    std::unordered_map<const FormulaNode*, std::size_t> memo;
    std::function<std::size_t(const FormulaNode*)> go = [&](const FormulaNode* n) -> std::size_t {
        if (!n) return 0;
        if (auto it = memo.find(n); it != memo.end()) return it->second;
        std::size_t d = std::max(go(n->left.get()), go(n->right.get()));
        if (n->kind == FormulaKind::box || n->kind == FormulaKind::boxplus) ++d;
        memo[n] = d;
        return d;
    };
    return go(f.node());
}

std::size_t tree_size(const Formula& f)
{
    constexpr std::size_t cap = std::numeric_limits<std::size_t>::max();
    std::unordered_map<const FormulaNode*, std::size_t> memo;
    std::function<std::size_t(const FormulaNode*)> go = [&](const FormulaNode* n) -> std::size_t {
        if (!n) return 0;
        if (auto it = memo.find(n); it != memo.end()) return it->second;
        std::size_t l = go(n->left.get()), r = go(n->right.get());
        std::size_t s = (l > cap - 1 - r) ? cap : l + r + 1;
        memo[n] = s;
        return s;
    };
    return go(f.node());
}

std::size_t dag_size(const Formula& f)
{
    std::size_t n = 0;
    visit_dag(f, [&](const FormulaNode&) { ++n; });
    return n;
}

bool contains_kind(const Formula& f, FormulaKind k)
{
    bool found = false;
    visit_dag(f, [&](const FormulaNode& n) { found = found || n.kind == k; });
    return found;
}

bool is_syntactically_flat(const Formula& f)
{
    std::unordered_map<const FormulaNode*, bool> memo;
    std::function<bool(const FormulaNode*)> go = [&](const FormulaNode* n) -> bool {
        if (auto it = memo.find(n); it != memo.end()) return it->second;
        bool flat = true;
        switch (n->kind) {
        case FormulaKind::idisj: flat = false; break;
        case FormulaKind::conj: flat = go(n->left.get()) && go(n->right.get()); break;
        // t ⊆ s with t ⊨ φ makes every {w} ⊆ t support φ, so a flat consequent suffices.
        case FormulaKind::implies: flat = go(n->right.get()); break;
        default: break;
        }
        memo[n] = flat;
        return flat;
    };
    return go(f.node());
}

std::set<std::string> atoms_of(const Formula& f)
{
    std::set<std::string> out;
    visit_dag(f, [&](const FormulaNode& n) {
        if (n.kind == FormulaKind::atom) out.insert(n.name);
    });
    return out;
}

std::set<std::string> agents_of(const Formula& f)
{
    std::set<std::string> out;
    visit_dag(f, [&](const FormulaNode& n) {
        if (n.kind == FormulaKind::box || n.kind == FormulaKind::boxplus) out.insert(n.name);
    });
    return out;
}

}   // namespace inqkit
