#include "inqkit/charform.hpp"

#include "inqkit/bisim.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace inqkit {

namespace {

// A ∼ⁿ state type: the set of ∼ⁿ world classes a state meets, as a bit set.
using Type = std::uint64_t;

bool type_subset(Type a, Type b) { return (a & ~b) == 0; }

std::vector<Type> maximal_types(std::vector<Type> ts)
{
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    std::vector<Type> out;
    for (Type t : ts) {
        bool dominated = std::any_of(ts.begin(), ts.end(), [&](Type u) { return u != t && type_subset(t, u); });
        if (!dominated) out.push_back(t);
    }
    return out;
}

}   // namespace

struct Characteriser::Impl {
    const InqModel& m;
    std::size_t max_depth;
    CharformOptions opts;
    FormulaStore store;
    std::vector<std::vector<std::size_t>> classes;   // [level][world]
    std::vector<std::size_t> counts;
    std::map<std::pair<std::size_t, std::size_t>, Formula> world_memo;   // (level, class)
    std::map<std::pair<std::size_t, Type>, Formula> type_memo;

    Impl(const InqModel& model, std::size_t depth, CharformOptions o) : m(model), max_depth(depth), opts(o)
    {
        if (depth > opts.depth_cap)
            throw ModelError("characteristic formula depth " + std::to_string(depth) + " exceeds cap " +
                             std::to_string(opts.depth_cap));
        BisimLayers layers(m, m, Depth::of(depth));
        for (std::size_t k = 0; k <= depth; ++k) {
            classes.push_back(world_classes(layers, Depth::of(k)));
            counts.push_back(classes.back().empty()
                                 ? 0
                                 : *std::max_element(classes.back().begin(), classes.back().end()) + 1);
        }
    }

    void check_level(std::size_t n) const
    {
        if (n > max_depth) throw ModelError("depth " + std::to_string(n) + " exceeds the characteriser's depth");
    }

    Type type_of(InfoState s, std::size_t n) const
    {
        Type t = 0;
        s.for_each([&](std::size_t w) { t |= Type{1} << classes[n][w]; });
        return t;
    }

    Formula world(std::size_t w, std::size_t n)
    {
        const std::size_t c = classes[n][w];
        auto key = std::make_pair(n, c);
        if (auto it = world_memo.find(key); it != world_memo.end()) return it->second;
        std::vector<Formula> parts;
        if (n == 0) {
            for (std::size_t p = 0; p < m.atom_count(); ++p)
                if (m.holds(p, w)) parts.push_back(store.atom(m.atoms()[p]));
            for (std::size_t p = 0; p < m.atom_count(); ++p)
                if (!m.holds(p, w)) parts.push_back(store.neg(store.atom(m.atoms()[p])));
        } else {
            parts.push_back(world(w, n - 1));
            for (std::size_t a = 0; a < m.agent_count(); ++a) agent_parts(w, a, n - 1, parts);
        }
        Formula f = store.conj_all(parts);
        world_memo.emplace(key, f);
        return f;
    }

    // χ for a state type: classical disjunction of its classes' world formulae.
    Formula type_formula(Type t, std::size_t n)
    {
        auto key = std::make_pair(n, t);
        if (auto it = type_memo.find(key); it != type_memo.end()) return it->second;
        std::vector<Formula> ds;
        for (std::size_t c = 0; c < counts[n]; ++c) {
            if (!((t >> c) & 1u)) continue;
            auto w = static_cast<std::size_t>(std::find(classes[n].begin(), classes[n].end(), c) - classes[n].begin());
            ds.push_back(world(w, n));
        }
        Formula f = store.cdisj_all(ds);
        type_memo.emplace(key, f);
        return f;
    }

    Formula family_formula(const std::vector<Type>& family, std::size_t n)
    {
        std::vector<Formula> ds;
        for (Type t : family) ds.push_back(type_formula(t, n));
        return store.idisj_all(ds);
    }

    std::vector<Type> sigma_types(const InqState& st, std::size_t n) const
    {
        std::vector<Type> ts;
        for (InfoState mx : st.maximal()) ts.push_back(type_of(mx, n));
        return maximal_types(ts);
    }

    void agent_parts(std::size_t w, std::size_t a, std::size_t n, std::vector<Formula>& parts)
    {
        const std::string& ag = m.agents()[a];
        const InqState& st = m.sigma(a, w);
        const std::vector<Type> top = sigma_types(st, n);
        parts.push_back(store.boxplus(ag, family_formula(top, n)));

        std::vector<Formula> negs;
        auto add = [&](const Formula& f) {
            Formula g = store.neg(store.boxplus(ag, f));
            if (std::none_of(negs.begin(), negs.end(), [&](const Formula& h) { return h.node() == g.node(); }))
                negs.push_back(g);
        };

        switch (opts.pi) {
        case PiEnumeration::drop_one: {
            for (std::size_t i = 0; i < top.size(); ++i) {
                if (top[i] == 0) continue;   // ∅ is supported by every family formula
                std::vector<Type> rest;
                for (std::size_t j = 0; j < top.size(); ++j) {
                    if (j == i) continue;
                    rest.push_back(top[j]);
                }
                // Σ(w) without top[i]: keep the proper subtypes of top[i] as well.
                std::vector<Type> family = rest;
                for_each_subset(InfoState(top[i]), [&](InfoState sub) {
                    if (sub.bits() != top[i]) family.push_back(sub.bits());
                });
                add(family_formula(maximal_types(family), n));
            }
            break;
        }
        case PiEnumeration::antichains: {
            std::set<Type> all;
            for (Type t : top)
                for_each_subset(InfoState(t), [&](InfoState sub) {
                    if (sub.bits() != 0) all.insert(sub.bits());
                });
            const std::vector<Type> elems(all.begin(), all.end());
            std::vector<Type> chosen;
            std::size_t produced = 0;
            std::function<void(std::size_t)> rec = [&](std::size_t i) {
                if (i == elems.size()) {
                    bool misses = std::any_of(top.begin(), top.end(), [&](Type t) {
                        return t != 0 && std::find(chosen.begin(), chosen.end(), t) == chosen.end();
                    });
                    if (!misses) return;
                    if (++produced > opts.antichain_cap)
                        throw ModelError("antichain enumeration exceeds cap; use the drop-one enumeration");
                    add(family_formula(chosen, n));
                    return;
                }
                rec(i + 1);
                Type t = elems[i];
                bool free = std::none_of(chosen.begin(), chosen.end(),
                                         [&](Type u) { return type_subset(t, u) || type_subset(u, t); });
                if (free) {
                    chosen.push_back(t);
                    rec(i + 1);
                    chosen.pop_back();
                }
            };
            rec(0);
            break;
        }
        case PiEnumeration::literal: {
            const std::vector<InfoState> members = st.members();
            if (members.size() > opts.literal_member_cap)
                throw ModelError("literal enumeration is capped at " + std::to_string(opts.literal_member_cap) +
                                 " members");
            std::set<Type> sigma_all;
            sigma_all.insert(Type{0});
            for (InfoState t : members) sigma_all.insert(type_of(t, n));
            const std::uint64_t count = std::uint64_t{1} << members.size();
            for (std::uint64_t mask = 0; mask < count; ++mask) {
                std::set<Type> covered{Type{0}};
                std::vector<Formula> ds;
                for (std::size_t i = 0; i < members.size(); ++i) {
                    if (!((mask >> i) & 1u)) continue;
                    covered.insert(type_of(members[i], n));
                    std::vector<Formula> ws;
                    members[i].for_each([&](std::size_t v) { ws.push_back(world(v, n)); });
                    ds.push_back(store.cdisj_all(ws));
                }
                if (maximal_types({covered.begin(), covered.end()}) == maximal_types({sigma_all.begin(), sigma_all.end()}))
                    continue;
                add(store.idisj_all(ds));
            }
            break;
        }
        }
        parts.insert(parts.end(), negs.begin(), negs.end());
    }
};

Characteriser::Characteriser(const InqModel& m, std::size_t max_depth, CharformOptions opts)
    : impl_(std::make_unique<Impl>(m, max_depth, opts))
{
}

Characteriser::~Characteriser() = default;

Formula Characteriser::world(std::size_t w, std::size_t n)
{
    impl_->check_level(n);
    if (w >= impl_->m.world_count()) throw ModelError("world index out of range");
    return impl_->world(w, n);
}

Formula Characteriser::state(InfoState s, std::size_t n)
{
    impl_->check_level(n);
    if (!s.subset_of(impl_->m.all_worlds())) throw ModelError("state has members outside the model");
    return impl_->type_formula(impl_->type_of(s, n), n);
}

Formula Characteriser::inqstate(const InqState& pi, std::size_t n)
{
    impl_->check_level(n);
    return impl_->family_formula(impl_->sigma_types(pi, n), n);
}

std::size_t Characteriser::world_class(std::size_t w, std::size_t n) const { return impl_->classes.at(n).at(w); }
std::size_t Characteriser::class_count(std::size_t n) const { return impl_->counts.at(n); }

Formula chi_world(const InqModel& m, std::size_t w, std::size_t n, CharformOptions opts)
{
    return Characteriser(m, n, opts).world(w, n);
}

Formula chi_state(const InqModel& m, InfoState s, std::size_t n, CharformOptions opts)
{
    return Characteriser(m, n, opts).state(s, n);
}

Formula chi_inqstate(const InqModel& m, const InqState& pi, std::size_t n, CharformOptions opts)
{
    return Characteriser(m, n, opts).inqstate(pi, n);
}

Formula class_formula(const InqModel& m, const std::vector<Point>& reps, std::size_t n, ClassKind kind,
                      CharformOptions opts)
{
    Characteriser ch(m, n, opts);
    std::vector<Formula> parts;
    auto push_unique = [&](const Formula& f) {
        if (std::none_of(parts.begin(), parts.end(), [&](const Formula& g) { return g.node() == f.node(); }))
            parts.push_back(f);
    };
    for (const Point& p : reps) {
        if (kind == ClassKind::world) {
            const auto* w = std::get_if<WorldPoint>(&p);
            if (!w) throw ModelError("world class formula needs world representatives");
            push_unique(ch.world(w->world, n));
        } else {
            const auto* s = std::get_if<InfoState>(&p);
            if (!s) throw ModelError("state class formula needs state representatives");
            push_unique(ch.state(*s, n));
        }
    }
    return kind == ClassKind::world ? cdisj_all(parts) : idisj_all(parts);
}

}   // namespace inqkit
