#include "inqkit/transforms.hpp"

#include "inqkit/epistemic.hpp"
#include "inqkit/fo.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace inqkit {

namespace {

// Output under construction; states are kept by output extension.
struct Builder {
    const Structure& in;
    Structure out;
    std::vector<std::size_t> origin, stage;
    std::size_t empty_state = 0;

    explicit Builder(const Structure& s) : in(s)
    {
        out.agents = s.agents;
        out.atoms = s.atoms;
        out.valuation.assign(s.atoms.size(), InfoState{});
        out.edges.assign(s.agents.size(), {});
        auto e = s.find_state(InfoState{});
        if (!e) throw ModelError("relational model lacks the empty state");
        empty_state = add_state(InfoState{}, *e < s.state_labels.size() ? s.state_labels[*e] : "empty");
    }

    std::size_t add_world(std::size_t from, std::size_t at_stage, std::string label)
    {
        if (out.worlds.size() >= max_worlds) throw ModelError("stratification exceeds the world cap");
        out.worlds.push_back(std::move(label));
        origin.push_back(from);
        stage.push_back(at_stage);
        for (auto& row : out.edges) row.emplace_back();
        for (std::size_t p = 0; p < in.atoms.size(); ++p)
            if (in.valuation[p].contains(from)) out.valuation[p].insert(out.worlds.size() - 1);
        return out.worlds.size() - 1;
    }

    std::size_t add_state(InfoState ext, std::string label)
    {
        out.states.push_back(ext);
        out.state_labels.push_back(std::move(label));
        return out.states.size() - 1;
    }

    std::string world_label(std::size_t w) const { return in.worlds[w]; }
    std::string state_label(std::size_t i) const
    {
        return i < in.state_labels.size() ? in.state_labels[i] : "s" + std::to_string(i);
    }
};

}   // namespace

Stratified stratify(const RelationalModel& rm, const Point& point, StratifyOptions opts)
{
    const Structure& in = rm.structure();
    if (opts.depth && (*opts.depth == 0 || *opts.depth % 2 != 0))
        throw ModelError("stratification depth must be even and nonzero");
    Builder b(in);

    // Input world -> output world, per stage.
    std::vector<std::map<std::size_t, std::size_t>> tagged;
    Point out_point = WorldPoint{0};
    std::size_t last_stage = 0;   // worlds of this stage are glued to the copy of the input
    bool truncated = opts.depth.has_value();

    auto tag_worlds = [&](std::size_t n, const std::set<std::size_t>& worlds) {
        tagged.resize(std::max(tagged.size(), n + 1));
        for (std::size_t u : worlds)
            if (!tagged[n].count(u)) tagged[n][u] = b.add_world(u, n, b.world_label(u) + "@" + std::to_string(n));
        if (!opts.depth && b.out.worlds.size() > opts.budget)
            throw ModelError("unbounded stratification exhausted its budget of " + std::to_string(opts.budget) + " worlds");
    };
    // Tags the states of S_n and the stage n+1 worlds they contain; returns input state -> output state.
    auto tag_states = [&](std::size_t n, const std::set<std::size_t>& chosen) {
        std::set<std::size_t> next;
        for (std::size_t i : chosen) in.states[i].for_each([&](std::size_t u) { next.insert(u); });
        tag_worlds(n + 1, next);
        std::map<std::size_t, std::size_t> map;
        for (std::size_t i : chosen) {
            InfoState ext;
            in.states[i].for_each([&](std::size_t u) { ext.insert(tagged[n + 1].at(u)); });
            map[i] = b.add_state(ext, b.state_label(i) + "@" + std::to_string(n));
        }
        return map;
    };
    auto choose = [&](std::size_t n) {
        std::set<std::size_t> chosen;
        if (opts.policy == StratifyPolicy::locally_full) {
            // Every state under some σ_a(u) of the stage, so local fullness survives.
            std::vector<InfoState> sig;
            for (const auto& [u, _] : tagged[n])
                for (std::size_t a = 0; a < in.agents.size(); ++a) {
                    InfoState k;
                    for (std::size_t i : in.edges[a][u]) k |= in.states[i];
                    sig.push_back(k);
                }
            for (std::size_t i = 0; i < in.states.size(); ++i)
                for (InfoState k : sig)
                    if (in.states[i].subset_of(k)) chosen.insert(i);
        } else {
            for (const auto& [u, _] : tagged[n])
                for (std::size_t a = 0; a < in.agents.size(); ++a)
                    for (std::size_t i : in.edges[a][u]) chosen.insert(i);
        }
        std::erase_if(chosen, [&](std::size_t i) { return in.states[i].empty(); });
        return chosen;
    };
    auto link = [&](std::size_t n, const std::map<std::size_t, std::size_t>& smap) {
        for (const auto& [u, ou] : tagged[n])
            for (std::size_t a = 0; a < in.agents.size(); ++a) {
                auto& e = b.out.edges[a][ou];
                for (std::size_t i : in.edges[a][u]) e.push_back(in.states[i].empty() ? b.empty_state : smap.at(i));
                std::sort(e.begin(), e.end());
            }
    };

    std::size_t n = 0;
    if (const auto* w = std::get_if<WorldPoint>(&point)) {
        if (w->world >= in.worlds.size()) throw ModelError("point world out of range");
        tag_worlds(0, {w->world});
        out_point = WorldPoint{tagged[0].at(w->world)};
        last_stage = opts.depth ? *opts.depth / 2 : 0;
    } else {
        InfoState s0 = std::get<InfoState>(point);
        auto idx = in.find_state(s0);
        if (!idx) throw ModelError("point state is not in the second sort");
        std::set<std::size_t> subsets;
        for (std::size_t i = 0; i < in.states.size(); ++i)
            if (!in.states[i].empty() && in.states[i].subset_of(s0)) subsets.insert(i);
        tagged.resize(1);
        auto smap = tag_states(0, subsets);
        InfoState ext;
        s0.for_each([&](std::size_t u) { ext.insert(tagged[1].at(u)); });
        out_point = ext;
        n = 1;
        last_stage = opts.depth ? *opts.depth / 2 + 1 : 0;
    }

    while (true) {
        if (truncated && n == last_stage) break;
        std::set<std::size_t> chosen = choose(n);
        auto smap = tag_states(n, chosen);
        link(n, smap);
        ++n;
        if (n >= tagged.size() || tagged[n].empty()) {
            truncated = false;
            break;
        }
    }

    if (truncated) {
        // One shared copy of the input, entered from the last tagged stage.
        std::vector<std::size_t> gw(in.worlds.size());
        for (std::size_t u = 0; u < in.worlds.size(); ++u) gw[u] = b.add_world(u, unglued, b.world_label(u));
        std::map<std::size_t, std::size_t> gs;
        for (std::size_t i = 0; i < in.states.size(); ++i) {
            if (in.states[i].empty()) {
                gs[i] = b.empty_state;
                continue;
            }
            InfoState ext;
            in.states[i].for_each([&](std::size_t u) { ext.insert(gw[u]); });
            gs[i] = b.add_state(ext, b.state_label(i));
        }
        for (std::size_t u = 0; u < in.worlds.size(); ++u)
            for (std::size_t a = 0; a < in.agents.size(); ++a) {
                auto& e = b.out.edges[a][gw[u]];
                for (std::size_t i : in.edges[a][u]) e.push_back(gs.at(i));
                std::sort(e.begin(), e.end());
            }
        if (n < tagged.size()) link(n, gs);
    }

    std::set<std::string> labels(b.out.worlds.begin(), b.out.worlds.end());
    if (labels.size() != b.out.worlds.size()) throw ModelError("stratified world labels collide; rename worlds containing '@'");
    Stratified out{RelationalModel::from_structure(std::move(b.out)), out_point, std::move(b.origin), std::move(b.stage)};
    return out;
}

Report check_stratified(const Structure& s, const Point& point, std::size_t l)
{
    const std::string prop = "stratified(" + std::to_string(l) + ")";
    if (l == 0 || l % 2 != 0) return Report::fail(prop, "depth must be even and nonzero");
    Element centre;
    InfoState s0;
    const bool world_point = std::holds_alternative<WorldPoint>(point);
    if (world_point) {
        centre = Element{Sort::world, std::get<WorldPoint>(point).world};
        if (centre.index >= s.worlds.size()) return Report::fail(prop, "point world out of range");
    } else {
        s0 = std::get<InfoState>(point);
        auto idx = s.find_state(s0);
        if (!idx) return Report::fail(prop, "point state " + format_state(s0, s.worlds) + " is not in the second sort");
        centre = Element{Sort::state, *idx};
    }
    Neighbourhood nb = neighbourhood(s, centre, world_point ? l : l + 1, DistanceMode::skip_empty);
    const Structure& r = nb.structure;
    const std::size_t nw = r.worlds.size();
    constexpr long none = -1000000;
    std::vector<long> level(nw + r.states.size(), none);
    std::deque<std::size_t> queue;
    std::string conflict;
    auto name = [&](std::size_t x) {
        return x < nw ? "world " + r.worlds[x] : "state " + r.state_labels[x - nw] + " " + format_state(r.states[x - nw], r.worlds);
    };
    auto assign = [&](std::size_t x, long lv, const std::string& why) {
        if (!conflict.empty()) return;
        if (lv < 0) {
            conflict = name(x) + " would sit below stratum 0 (" + why + ")";
        } else if (level[x] == none) {
            level[x] = lv;
            queue.push_back(x);
        } else if (level[x] != lv) {
            conflict = name(x) + " is needed in strata " + std::to_string(level[x]) + " and " + std::to_string(lv) + " (" + why + ")";
        }
    };
    if (world_point) {
        assign(nb.centre.index, 0, "point");
    } else {
        for (std::size_t i = 0; i < r.states.size(); ++i) {
            if (!r.states[i].empty() && s.states[nb.states[i]].subset_of(s0)) assign(nw + i, 0, "subset of the point");
        }
    }
    while (!queue.empty() && conflict.empty()) {
        std::size_t x = queue.front();
        queue.pop_front();
        long lv = level[x];
        if (x < nw) {
            for (std::size_t a = 0; a < r.agents.size(); ++a)
                for (std::size_t i : r.edges[a][x])
                    if (!r.states[i].empty()) assign(nw + i, lv, "E from " + r.worlds[x]);
            for (std::size_t i = 0; i < r.states.size(); ++i)
                if (r.states[i].contains(x)) assign(nw + i, lv - 1, "contains " + r.worlds[x]);
        } else {
            const std::size_t i = x - nw;
            r.states[i].for_each([&](std::size_t u) { assign(u, lv + 1, "member of " + r.state_labels[i]); });
            for (std::size_t a = 0; a < r.agents.size(); ++a)
                for (std::size_t u = 0; u < nw; ++u)
                    if (r.edge(a, u, i)) assign(u, lv, "E to " + r.state_labels[i]);
        }
    }
    if (!conflict.empty()) return Report::fail(prop, conflict);
    for (std::size_t x = 0; x < level.size(); ++x) {
        if (x >= nw && r.states[x - nw].empty()) continue;
        if (level[x] == none) return Report::fail(prop, name(x) + " belongs to no stratum");
        if (x < nw && level[x] == 0 && !(world_point && x == nb.centre.index))
            return Report::fail(prop, name(x) + " is in stratum 0 besides the point");
        if (x >= nw && level[x] == 0 && !world_point && !s.states[nb.states[x - nw]].subset_of(s0))
            return Report::fail(prop, name(x) + " is in stratum 0 but not a subset of the point");
    }
    return Report::pass(prop);
}

Covering rich_cover(const InqModel& m, std::size_t k)
{
    if (k == 0) throw ModelError("richness covering needs K >= 1");
    const std::size_t nw = m.world_count();
    if (nw * k > max_worlds) throw ModelError("covering would exceed the world cap of " + std::to_string(max_worlds));
    auto index = [&](std::size_t w, std::size_t copy) { return w * k + copy; };
    auto preimage = [&](InfoState s) {
        InfoState out;
        s.for_each([&](std::size_t w) {
            for (std::size_t c = 0; c < k; ++c) out.insert(index(w, c));
        });
        return out;
    };
    std::vector<std::string> worlds;
    std::vector<std::size_t> projection;
    for (std::size_t w = 0; w < nw; ++w)
        for (std::size_t c = 0; c < k; ++c) {
            worlds.push_back(m.worlds()[w] + "." + std::to_string(c + 1));
            projection.push_back(w);
        }
    std::vector<std::vector<InqState>> sigma(m.agent_count(), std::vector<InqState>(nw * k));
    for (std::size_t a = 0; a < m.agent_count(); ++a)
        for (std::size_t x = 0; x < nw * k; ++x) {
            std::vector<InfoState> gens;
            for (InfoState mx : m.sigma(a, projection[x]).maximal()) gens.push_back(preimage(mx));
            sigma[a][x] = InqState::from_generators(gens);
        }
    std::vector<InfoState> val;
    for (std::size_t p = 0; p < m.atom_count(); ++p) val.push_back(preimage(m.valuation(p)));
    InqModel target(worlds, m.agents(), m.atoms(), std::move(sigma), std::move(val));
    return Covering{m, std::move(target), std::move(projection)};
}

Report verify_covering(const Covering& c)
{
    const std::string prop = "covering";
    const InqModel& src = c.source;
    const InqModel& tgt = c.target;
    if (c.projection.size() != tgt.world_count()) return Report::fail(prop, "projection does not cover every target world");
    InfoState image;
    for (std::size_t x = 0; x < tgt.world_count(); ++x) {
        if (c.projection[x] >= src.world_count()) return Report::fail(prop, "projection of " + tgt.worlds()[x] + " is out of range");
        image.insert(c.projection[x]);
    }
    if (image != src.all_worlds()) {
        std::size_t miss = (src.all_worlds() - image).first();
        return Report::fail(prop, "surjectivity: no target world projects to " + src.worlds()[miss]);
    }
    std::set<std::string> sa(src.agents().begin(), src.agents().end()), ta(tgt.agents().begin(), tgt.agents().end());
    if (sa != ta) return Report::fail(prop, "source and target agents differ");

    std::set<std::string> atoms(src.atoms().begin(), src.atoms().end());
    atoms.insert(tgt.atoms().begin(), tgt.atoms().end());
    for (const std::string& p : atoms) {
        auto sp = src.find_atom(p), tp = tgt.find_atom(p);
        for (std::size_t x = 0; x < tgt.world_count(); ++x) {
            bool tv = tp && tgt.holds(*tp, x);
            bool sv = sp && src.holds(*sp, c.projection[x]);
            if (tv != sv)
                return Report::fail(prop, "valuation: " + p + " is " + (tv ? "true" : "false") + " at " + tgt.worlds()[x] +
                                              " but " + (sv ? "true" : "false") + " at " + src.worlds()[c.projection[x]]);
        }
    }

    auto project = [&](InfoState s) {
        InfoState out;
        s.for_each([&](std::size_t x) { out.insert(c.projection[x]); });
        return out;
    };
    for (std::size_t ta_i = 0; ta_i < tgt.agent_count(); ++ta_i) {
        std::size_t sa_i = src.agent_index(tgt.agents()[ta_i]);
        for (std::size_t x = 0; x < tgt.world_count(); ++x) {
            std::vector<InfoState> gens;
            for (InfoState mx : tgt.sigma(ta_i, x).maximal()) gens.push_back(project(mx));
            InqState img = InqState::from_generators(gens);
            if (!(img == src.sigma(sa_i, c.projection[x])))
                return Report::fail(prop, "Sigma_" + tgt.agents()[ta_i] + " square at " + tgt.worlds()[x] + ": image " +
                                              format_inqstate(img, src.worlds()) + " but source has " +
                                              format_inqstate(src.sigma(sa_i, c.projection[x]), src.worlds()));
        }
    }

    WorldRelation graph;
    for (std::size_t x = 0; x < tgt.world_count(); ++x) graph.rows.push_back(InfoState::singleton(c.projection[x]));
    Report b = check_world_bisimulation(tgt, src, graph);
    if (!b) return Report::fail(prop, "projection graph: " + b.witness);
    return Report::pass(prop);
}

InqModel simplify(const InqModel& m, Depth granularity)
{
    if (Report r = check_s5(m); !r) throw ModelError("S5 violation: " + r.witness);
    const std::vector<std::size_t> colour = world_classes(m, granularity);
    std::vector<std::vector<InqState>> sigma(m.agent_count(), std::vector<InqState>(m.world_count()));
    for (std::size_t a = 0; a < m.agent_count(); ++a)
        for (std::size_t w = 0; w < m.world_count(); ++w) {
            const InfoState carrier = m.knowledge(a, w);
            std::vector<InfoState> gens;
            for (InfoState mx : m.sigma(a, w).maximal()) gens.push_back(saturate(mx, carrier, colour));
            sigma[a][w] = InqState::from_generators(gens);
        }
    std::vector<InfoState> val;
    for (std::size_t p = 0; p < m.atom_count(); ++p) val.push_back(m.valuation(p));
    return InqModel(m.worlds(), m.agents(), m.atoms(), std::move(sigma), std::move(val));
}

std::string stratify_policy_name(StratifyPolicy p)
{
    return p == StratifyPolicy::minimal ? "minimal" : "locally-full";
}

StratifyPolicy parse_stratify_policy(const std::string& s)
{
    if (s == "minimal") return StratifyPolicy::minimal;
    if (s == "locally-full") return StratifyPolicy::locally_full;
    throw ModelError("unknown stratification policy '" + s + "'");
}

}   // namespace inqkit
