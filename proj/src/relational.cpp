#include "inqkit/relational.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

namespace inqkit {

bool Structure::edge(std::size_t agent, std::size_t world, std::size_t state) const
{
    const auto& e = edges[agent][world];
    return std::binary_search(e.begin(), e.end(), state);
}

std::optional<std::size_t> Structure::find_state(InfoState extension) const
{
    for (std::size_t i = 0; i < states.size(); ++i)
        if (states[i] == extension) return i;
    return std::nullopt;
}

std::optional<std::size_t> Structure::find_world(const std::string& label) const
{
    auto it = std::find(worlds.begin(), worlds.end(), label);
    if (it == worlds.end()) return std::nullopt;
    return static_cast<std::size_t>(it - worlds.begin());
}

std::optional<std::size_t> Structure::find_state_label(const std::string& label) const
{
    auto it = std::find(state_labels.begin(), state_labels.end(), label);
    if (it == state_labels.end()) return std::nullopt;
    return static_cast<std::size_t>(it - state_labels.begin());
}

void Structure::default_state_labels()
{
    state_labels.resize(states.size());
    for (std::size_t i = 0; i < states.size(); ++i)
        if (state_labels[i].empty()) state_labels[i] = "s" + std::to_string(i);
}

Report check_relational(const Structure& s)
{
    const std::string prop = "relational-valid";
    const InfoState all = InfoState::full(s.worlds.size());
    if (s.edges.size() != s.agents.size()) return Report::fail(prop, "edge table does not match agent count");
    for (std::size_t i = 0; i < s.states.size(); ++i)
        if (!s.states[i].subset_of(all)) return Report::fail(prop, "state " + std::to_string(i) + " has foreign members");

    std::unordered_map<std::uint64_t, std::size_t> index;
    for (std::size_t i = 0; i < s.states.size(); ++i) {
        auto [it, fresh] = index.emplace(s.states[i].bits(), i);
        if (!fresh)
            return Report::fail(prop, "extensionality: states " + std::to_string(it->second) + " and " +
                                          std::to_string(i) + " both have extension " +
                                          format_state(s.states[i], s.worlds));
    }
    for (InfoState st : s.states) {
        std::string missing;
        st.for_each([&](std::size_t w) {
            InfoState smaller = st;
            smaller.erase(w);
            if (missing.empty() && !index.count(smaller.bits())) missing = format_state(smaller, s.worlds);
        });
        if (!missing.empty())
            return Report::fail(prop, "local powerset: " + missing + " is missing below " + format_state(st, s.worlds));
    }
    for (std::size_t a = 0; a < s.agents.size(); ++a) {
        if (s.edges[a].size() != s.worlds.size()) return Report::fail(prop, "edge table does not match world count");
        for (std::size_t w = 0; w < s.worlds.size(); ++w) {
            const auto& e = s.edges[a][w];
            if (e.empty())
                return Report::fail(prop, "non-emptiness: E_" + s.agents[a] + "[" + s.worlds[w] + "] is empty");
            for (std::size_t i : e)
                if (i >= s.states.size()) return Report::fail(prop, "edge to unknown state");
        }
    }
    for (std::size_t a = 0; a < s.agents.size(); ++a) {
        for (std::size_t w = 0; w < s.worlds.size(); ++w) {
            for (std::size_t i : s.edges[a][w]) {
                std::string missing;
                s.states[i].for_each([&](std::size_t x) {
                    InfoState smaller = s.states[i];
                    smaller.erase(x);
                    if (missing.empty() && !s.edge(a, w, index.at(smaller.bits())))
                        missing = format_state(smaller, s.worlds);
                });
                if (!missing.empty())
                    return Report::fail(prop, "downward closure: E_" + s.agents[a] + "[" + s.worlds[w] + "] contains " +
                                                  format_state(s.states[i], s.worlds) + " but not " + missing);
            }
        }
    }
    return Report::pass(prop);
}

RelationalModel RelationalModel::from_structure(Structure s)
{
    Report r = check_relational(s);
    if (!r) throw ModelError("not a relational model: " + r.witness);
    s.default_state_labels();
    return RelationalModel(std::move(s));
}

RelationalModel encode_relational(const InqModel& m, EncodeMode mode, std::optional<InfoState> point)
{
    std::set<std::uint64_t> states;
    auto add_subsets = [&](InfoState s) { for_each_subset(s, [&](InfoState t) { states.insert(t.bits()); }); };
    switch (mode) {
    case EncodeMode::minimal:
        for (std::size_t a = 0; a < m.agent_count(); ++a)
            for (std::size_t w = 0; w < m.world_count(); ++w)
                for (InfoState mx : m.sigma(a, w).maximal()) add_subsets(mx);
        break;
    case EncodeMode::locally_full:
        for (std::size_t a = 0; a < m.agent_count(); ++a)
            for (std::size_t w = 0; w < m.world_count(); ++w) add_subsets(m.knowledge(a, w));
        break;
    case EncodeMode::full:
        if (m.world_count() > full_encoding_world_cap)
            throw ModelError("full encoding is capped at " + std::to_string(full_encoding_world_cap) + " worlds");
        add_subsets(m.all_worlds());
        break;
    }
    if (point) add_subsets(*point);

    Structure s;
    s.worlds = m.worlds();
    s.agents = m.agents();
    s.atoms = m.atoms();
    std::unordered_map<std::uint64_t, std::size_t> index;
    for (auto b : states) {
        index[b] = s.states.size();
        s.states.emplace_back(b);
    }
    s.edges.assign(m.agent_count(), std::vector<std::vector<std::size_t>>(m.world_count()));
    for (std::size_t a = 0; a < m.agent_count(); ++a) {
        for (std::size_t w = 0; w < m.world_count(); ++w) {
            auto& e = s.edges[a][w];
            for (InfoState t : m.sigma(a, w).members()) e.push_back(index.at(t.bits()));
            std::sort(e.begin(), e.end());
        }
    }
    for (std::size_t p = 0; p < m.atom_count(); ++p) s.valuation.push_back(m.valuation(p));
    return RelationalModel::from_structure(std::move(s));
}

InqModel decode_relational(const RelationalModel& r)
{
    const Structure& s = r.structure();
    std::vector<std::vector<InqState>> sigma(s.agents.size(), std::vector<InqState>(s.worlds.size()));
    for (std::size_t a = 0; a < s.agents.size(); ++a) {
        for (std::size_t w = 0; w < s.worlds.size(); ++w) {
            std::vector<InfoState> gens;
            for (std::size_t i : s.edges[a][w]) gens.push_back(s.states[i]);
            sigma[a][w] = InqState::from_generators(std::move(gens));
        }
    }
    return InqModel(s.worlds, s.agents, s.atoms, std::move(sigma), s.valuation);
}

Structure drop_empty_state(const Structure& s)
{
    Structure out = s;
    out.states.clear();
    out.state_labels.clear();
    std::vector<std::optional<std::size_t>> remap(s.states.size());
    for (std::size_t i = 0; i < s.states.size(); ++i) {
        if (s.states[i].empty()) continue;
        remap[i] = out.states.size();
        out.states.push_back(s.states[i]);
        if (i < s.state_labels.size()) out.state_labels.push_back(s.state_labels[i]);
    }
    for (auto& per_agent : out.edges) {
        for (auto& e : per_agent) {
            std::vector<std::size_t> kept;
            for (std::size_t i : e)
                if (remap[i]) kept.push_back(*remap[i]);
            e = std::move(kept);
        }
    }
    return out;
}

Structure disjoint_sum(const std::vector<std::pair<const Structure*, std::size_t>>& parts)
{
    if (parts.empty()) throw ModelError("disjoint sum of no parts");
    Structure out;
    out.agents = parts.front().first->agents;
    std::size_t copies = 0;
    for (const auto& [part, mult] : parts) {
        std::set<std::string> a(part->agents.begin(), part->agents.end());
        if (a != std::set<std::string>(out.agents.begin(), out.agents.end()))
            throw ModelError("disjoint sum parts disagree on agents");
        for (const auto& p : part->atoms)
            if (std::find(out.atoms.begin(), out.atoms.end(), p) == out.atoms.end()) out.atoms.push_back(p);
        copies += mult;
    }
    out.valuation.assign(out.atoms.size(), InfoState{});
    out.edges.assign(out.agents.size(), {});

    bool any_empty = false;
    for (const auto& [part, mult] : parts)
        if (mult > 0 && part->find_state(InfoState{})) any_empty = true;
    if (any_empty) {
        out.states.push_back(InfoState{});
        out.state_labels.push_back("empty");
    }

    std::size_t copy_no = 0;
    for (const auto& [part, mult] : parts) {
        std::vector<std::size_t> agent_map(part->agents.size());
        for (std::size_t a = 0; a < part->agents.size(); ++a)
            agent_map[a] = static_cast<std::size_t>(
                std::find(out.agents.begin(), out.agents.end(), part->agents[a]) - out.agents.begin());
        for (std::size_t c = 0; c < mult; ++c, ++copy_no) {
            const std::size_t offset = out.worlds.size();
            if (offset + part->worlds.size() > max_worlds) throw ModelError("disjoint sum exceeds world cap");
            for (const auto& w : part->worlds) out.worlds.push_back(copies == 1 ? w : w + "." + std::to_string(copy_no));
            std::vector<std::size_t> state_map(part->states.size());
            for (std::size_t i = 0; i < part->states.size(); ++i) {
                if (part->states[i].empty() && any_empty) {
                    state_map[i] = 0;
                    continue;
                }
                state_map[i] = out.states.size();
                out.states.emplace_back(part->states[i].bits() << offset);
                std::string label = i < part->state_labels.size() ? part->state_labels[i] : "s" + std::to_string(i);
                out.state_labels.push_back(copies == 1 ? label : label + "." + std::to_string(copy_no));
            }
            for (auto& row : out.edges) row.resize(out.worlds.size());
            for (std::size_t a = 0; a < part->agents.size(); ++a) {
                for (std::size_t w = 0; w < part->worlds.size(); ++w) {
                    auto& e = out.edges[agent_map[a]][offset + w];
                    for (std::size_t i : part->edges[a][w]) e.push_back(state_map[i]);
                    std::sort(e.begin(), e.end());
                }
            }
            for (std::size_t p = 0; p < part->atoms.size(); ++p) {
                auto idx = static_cast<std::size_t>(std::find(out.atoms.begin(), out.atoms.end(), part->atoms[p]) -
                                                    out.atoms.begin());
                out.valuation[idx] |= InfoState(part->valuation[p].bits() << offset);
            }
        }
    }
    return out;
}

std::string encode_mode_name(EncodeMode m)
{
    switch (m) {
    case EncodeMode::minimal: return "minimal";
    case EncodeMode::locally_full: return "locally-full";
    case EncodeMode::full: return "full";
    }
    return "?";
}

EncodeMode parse_encode_mode(const std::string& s)
{
    if (s == "minimal") return EncodeMode::minimal;
    if (s == "locally-full") return EncodeMode::locally_full;
    if (s == "full") return EncodeMode::full;
    throw ModelError("unknown encoding mode '" + s + "'");
}

}   // namespace inqkit
