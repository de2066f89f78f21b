#include "inqkit/semantics.hpp"

#include <unordered_map>

namespace inqkit {

namespace {

struct Node {
    FormulaKind kind;
    std::size_t index = 0;   // atom or agent index
    std::size_t left = 0;
    std::size_t right = 0;
    bool flat = false;
};

// Dense table while the state space is small, hash map beyond that.
class Memo {
public:
    explicit Memo(std::size_t worlds) : dense_(worlds <= 12)
    {
        if (dense_) table_.assign(std::size_t{1} << worlds, -1);
    }
    int get(InfoState s) const
    {
        if (dense_) return table_[s.bits()];
        auto it = map_.find(s.bits());
        return it == map_.end() ? -1 : it->second;
    }
    void put(InfoState s, bool v)
    {
        if (dense_)
            table_[s.bits()] = v;
        else
            map_[s.bits()] = v;
    }

private:
    bool dense_;
    std::vector<signed char> table_;
    std::unordered_map<std::uint64_t, bool> map_;
};

}   // namespace

struct SupportEvaluator::Impl {
    const InqModel& m;
    EvalOptions opts;
    std::vector<Node> nodes;
    std::vector<Memo> memo;
    std::size_t root = 0;

    Impl(const InqModel& model, const Formula& f, EvalOptions o) : m(model), opts(o)
    {
        std::unordered_map<const FormulaNode*, std::size_t> ids;
        root = compile(f, ids);
        memo.assign(nodes.size(), Memo(m.world_count()));
    }

    std::size_t compile(const Formula& f, std::unordered_map<const FormulaNode*, std::size_t>& ids)
    {
        if (auto it = ids.find(f.node()); it != ids.end()) return it->second;
        Node n{f.kind()};
        switch (f.kind()) {
        case FormulaKind::atom: {
            auto i = m.find_atom(f.name());
            if (!i) throw SignatureError("atom '" + f.name() + "' is not in the model signature");
            n.index = *i;
            break;
        }
        case FormulaKind::bottom: break;
        case FormulaKind::box:
        case FormulaKind::boxplus: {
            auto i = m.find_agent(f.name());
            if (!i) throw SignatureError("agent '" + f.name() + "' is not in the model signature");
            n.index = *i;
            n.left = compile(f.body(), ids);
            break;
        }
        default:
            n.left = compile(f.left(), ids);
            n.right = compile(f.right(), ids);
            break;
        }
        switch (n.kind) {
        case FormulaKind::idisj: n.flat = false; break;
        case FormulaKind::conj: n.flat = nodes[n.left].flat && nodes[n.right].flat; break;
        case FormulaKind::implies: n.flat = nodes[n.right].flat; break;
        default: n.flat = true; break;
        }
        nodes.push_back(n);
        ids[f.node()] = nodes.size() - 1;
        return nodes.size() - 1;
    }

    bool eval(std::size_t id, InfoState s)
    {
        int cached = memo[id].get(s);
        if (cached >= 0) return cached != 0;
        bool v = compute(id, s);
        memo[id].put(s, v);
        return v;
    }

    bool compute(std::size_t id, InfoState s)
    {
        const Node n = nodes[id];
        switch (n.kind) {
        case FormulaKind::atom: return s.subset_of(m.valuation(n.index));
        case FormulaKind::bottom: return s.empty();
        case FormulaKind::conj: return eval(n.left, s) && eval(n.right, s);
        case FormulaKind::idisj: return eval(n.left, s) || eval(n.right, s);
        case FormulaKind::implies: {
            if (opts.flat_shortcut && n.flat && s.size() > 1) {
                bool ok = true;
                s.for_each([&](std::size_t w) { ok = ok && eval(id, InfoState::singleton(w)); });
                return ok;
            }
            bool ok = true;
            for_each_subset(s, [&](InfoState t) { ok = ok && (!eval(n.left, t) || eval(n.right, t)); });
            return ok;
        }
        case FormulaKind::box: {
            bool ok = true;
            s.for_each([&](std::size_t w) { ok = ok && eval(n.left, m.knowledge(n.index, w)); });
            return ok;
        }
        case FormulaKind::boxplus: {
            bool ok = true;
            s.for_each([&](std::size_t w) {
                if (!ok) return;
                const InqState& st = m.sigma(n.index, w);
                if (opts.maximal_only) {
                    for (InfoState t : st.maximal()) ok = ok && eval(n.left, t);
                } else {
                    for (InfoState t : st.members()) ok = ok && eval(n.left, t);
                }
            });
            return ok;
        }
        }
        return false;
    }
};

SupportEvaluator::SupportEvaluator(const InqModel& m, const Formula& f, EvalOptions opts)
    : impl_(std::make_unique<Impl>(m, f, opts))
{
}
SupportEvaluator::~SupportEvaluator() = default;
SupportEvaluator::SupportEvaluator(SupportEvaluator&&) noexcept = default;

bool SupportEvaluator::supports(InfoState s)
{
    if (!s.subset_of(impl_->m.all_worlds())) throw ModelError("state has members outside the model");
    return impl_->eval(impl_->root, s);
}

std::vector<InfoState> SupportEvaluator::support_set()
{
    std::vector<InfoState> out;
    for (InfoState s : all_subsets(impl_->m.all_worlds()))
        if (supports(s)) out.push_back(s);
    return out;
}

bool supports(const InqModel& m, InfoState s, const Formula& f, EvalOptions opts)
{
    return SupportEvaluator(m, f, opts).supports(s);
}

bool truth(const InqModel& m, std::size_t world, const Formula& f, EvalOptions opts)
{
    if (world >= m.world_count()) throw ModelError("world index out of range");
    return SupportEvaluator(m, f, opts).truth(world);
}

bool is_truth_conditional(const InqModel& m, const Formula& f)
{
    if (m.world_count() > truth_conditional_world_cap)
        throw ModelError("truth-conditionality check is capped at " + std::to_string(truth_conditional_world_cap) +
                         " worlds");
    SupportEvaluator ev(m, f);
    InfoState true_at;
    for (std::size_t w = 0; w < m.world_count(); ++w)
        if (ev.truth(w)) true_at.insert(w);
    bool ok = true;
    for_each_subset(m.all_worlds(), [&](InfoState s) { ok = ok && ev.supports(s) == s.subset_of(true_at); });
    return ok;
}

namespace {

std::size_t kripke_index(const std::vector<std::string>& names, const std::string& x, const char* what)
{
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == x) return i;
    throw SignatureError(std::string(what) + " '" + x + "' is not in the model signature");
}

bool kripke_eval(const KripkeModel& k, std::size_t world, const Formula& f)
{
    switch (f.kind()) {
    case FormulaKind::atom: return k.valuation[kripke_index(k.atoms, f.name(), "atom")].contains(world);
    case FormulaKind::bottom: return false;
    case FormulaKind::conj: return kripke_eval(k, world, f.left()) && kripke_eval(k, world, f.right());
    case FormulaKind::implies: return !kripke_eval(k, world, f.left()) || kripke_eval(k, world, f.right());
    case FormulaKind::box: {
        const InfoState succ = k.successors[kripke_index(k.agents, f.name(), "agent")][world];
        bool ok = true;
        succ.for_each([&](std::size_t v) { ok = ok && kripke_eval(k, v, f.body()); });
        return ok;
    }
    case FormulaKind::idisj:
    case FormulaKind::boxplus: break;
    }
    return false;
}

}   // namespace

bool kripke_truth(const KripkeModel& k, std::size_t world, const Formula& f)
{
    if (contains_kind(f, FormulaKind::idisj) || contains_kind(f, FormulaKind::boxplus))
        throw SignatureError("Kripke semantics covers only the basic modal fragment");
    if (world >= k.worlds.size()) throw ModelError("world index out of range");
    return kripke_eval(k, world, f);
}

}   // namespace inqkit
