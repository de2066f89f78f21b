#include "inqkit/epistemic.hpp"

#include <cstdint>
#include <deque>
#include <optional>

namespace inqkit {

Report check_s5(const InqModel& m)
{
    const std::string prop = "s5";
    for (std::size_t a = 0; a < m.agent_count(); ++a) {
        const std::string& ag = m.agents()[a];
        for (std::size_t w = 0; w < m.world_count(); ++w) {
            InfoState k = m.knowledge(a, w);
            if (!k.contains(w))
                return Report::fail(prop, "factivity: " + m.worlds()[w] + " is not in sigma_" + ag + "(" + m.worlds()[w] +
                                              ") = " + format_state(k, m.worlds()));
            std::string bad;
            k.for_each([&](std::size_t v) {
                if (bad.empty() && !(m.sigma(a, v) == m.sigma(a, w))) bad = m.worlds()[v];
            });
            if (!bad.empty())
                return Report::fail(prop, "introspection: Sigma_" + ag + "(" + bad + ") differs from Sigma_" + ag + "(" +
                                              m.worlds()[w] + ") though " + bad + " is in its class");
        }
    }
    return Report::pass(prop);
}

namespace {

void require_s5(const InqModel& m)
{
    Report r = check_s5(m);
    if (!r) throw ModelError("S5 violation: " + r.witness);
}

}   // namespace

InfoState a_class(const InqModel& m, std::size_t agent, std::size_t w)
{
    require_s5(m);
    if (agent >= m.agent_count() || w >= m.world_count()) throw ModelError("agent or world out of range");
    return m.knowledge(agent, w);
}

std::vector<InfoState> a_classes(const InqModel& m, std::size_t agent)
{
    require_s5(m);
    std::vector<InfoState> out;
    InfoState seen;
    for (std::size_t w = 0; w < m.world_count(); ++w) {
        if (seen.contains(w)) continue;
        InfoState c = m.knowledge(agent, w);
        out.push_back(c);
        seen |= c;
    }
    return out;
}

LocalAStructure local_a_structure(const InqModel& m, std::size_t agent, std::size_t w, Depth granularity)
{
    LocalAStructure out;
    out.carrier = a_class(m, agent, w);
    out.inqstate = m.sigma(agent, w);
    const std::vector<std::size_t> colour = world_classes(m, granularity);
    out.carrier.for_each([&](std::size_t v) { out.colouring[v] = colour[v]; });
    return out;
}

std::uint64_t colour_set(InfoState s, const std::vector<std::size_t>& colour)
{
    std::uint64_t out = 0;
    s.for_each([&](std::size_t v) { out |= std::uint64_t{1} << colour[v]; });
    return out;
}

InfoState saturate(InfoState s, InfoState carrier, const std::vector<std::size_t>& colour)
{
    const std::uint64_t cs = colour_set(s, colour);
    InfoState out;
    carrier.for_each([&](std::size_t v) {
        if ((cs >> colour[v]) & 1u) out.insert(v);
    });
    return out;
}

Report check_k_rich(const InqModel& m, std::size_t k)
{
    const std::string prop = "K-rich(" + std::to_string(k) + ")";
    if (Report r = check_s5(m); !r) return Report::fail(prop, r.witness);
    const std::vector<std::size_t> colour = world_classes(m, Depth::full());
    constexpr std::size_t member_cap = 24;
    for (std::size_t a = 0; a < m.agent_count(); ++a) {
        for (InfoState cls : a_classes(m, a)) {
            const std::vector<InfoState>& maxima = m.sigma(a, cls.first()).maximal();
            // Worlds of each maximal state whose colour occurs there fewer than k times.
            std::vector<InfoState> thin;
            for (InfoState mx : maxima) {
                std::map<std::size_t, std::size_t> count;
                mx.for_each([&](std::size_t v) { ++count[colour[v]]; });
                InfoState t;
                mx.for_each([&](std::size_t v) {
                    if (count[colour[v]] < k) t.insert(v);
                });
                thin.push_back(t);
            }
            for (std::size_t j = 0; j < maxima.size(); ++j) {
                if (thin[j].empty()) continue;
                if (maxima[j].size() > member_cap)
                    throw ModelError("K-rich check is capped at " + std::to_string(member_cap) + " worlds per state");
                std::optional<InfoState> bad;
                for_each_subset(maxima[j], [&](InfoState s) {
                    if (bad || !s.intersects(thin[j])) return;
                    bool extends = false;
                    for (std::size_t i = 0; i < maxima.size() && !extends; ++i)
                        extends = s.subset_of(maxima[i]) && !s.intersects(thin[i]);
                    if (!extends) bad = s;
                });
                if (bad)
                    return Report::fail(prop, "agent " + m.agents()[a] + ": state " + format_state(*bad, m.worlds()) +
                                                  " has no extension in Sigma with every colour 0 or at least " +
                                                  std::to_string(k) + " times");
            }
        }
    }
    return Report::pass(prop);
}

Report check_simple(const InqModel& m)
{
    const std::string prop = "simple";
    if (Report r = check_s5(m); !r) return Report::fail(prop, r.witness);
    const std::vector<std::size_t> colour = world_classes(m, Depth::full());
    for (std::size_t a = 0; a < m.agent_count(); ++a) {
        for (InfoState cls : a_classes(m, a)) {
            for (InfoState mx : m.sigma(a, cls.first()).maximal()) {
                InfoState sat = saturate(mx, cls, colour);
                if (sat != mx)
                    return Report::fail(prop, "agent " + m.agents()[a] + ": maximal state " + format_state(mx, m.worlds()) +
                                                  " is not colour-saturated; its saturation is " +
                                                  format_state(sat, m.worlds()));
            }
        }
    }
    return Report::pass(prop);
}

Report check_n_acyclic(const InqModel& m, std::size_t n)
{
    const std::string prop = "N-acyclic(" + std::to_string(n) + ")";
    if (Report r = check_s5(m); !r) return Report::fail(prop, r.witness);
    struct Cls {
        std::size_t agent;
        InfoState worlds;
    };
    std::vector<Cls> classes;
    for (std::size_t a = 0; a < m.agent_count(); ++a)
        for (InfoState c : a_classes(m, a)) classes.push_back({a, c});
    auto name = [&](const Cls& c) { return m.agents()[c.agent] + ":" + format_state(c.worlds, m.worlds()); };

    for (std::size_t i = 0; i < classes.size(); ++i)
        for (std::size_t j = i + 1; j < classes.size(); ++j)
            if (classes[i].agent != classes[j].agent && (classes[i].worlds & classes[j].worlds).size() >= 2)
                return Report::fail(prop, "classes " + name(classes[i]) + " and " + name(classes[j]) +
                                              " share more than one world");

    // Incidence graph: worlds 0..W-1, classes after them.
    const std::size_t nw = m.world_count();
    const std::size_t nv = nw + classes.size();
    std::vector<std::vector<std::size_t>> adj(nv);
    for (std::size_t i = 0; i < classes.size(); ++i)
        classes[i].worlds.for_each([&](std::size_t w) {
            adj[w].push_back(nw + i);
            adj[nw + i].push_back(w);
        });
    std::size_t best = SIZE_MAX;
    std::vector<std::size_t> best_cycle;
    for (std::size_t root = 0; root < nv; ++root) {
        std::vector<std::size_t> dist(nv, SIZE_MAX), parent(nv, SIZE_MAX);
        dist[root] = 0;
        std::deque<std::size_t> queue{root};
        while (!queue.empty()) {
            std::size_t u = queue.front();
            queue.pop_front();
            for (std::size_t v : adj[u]) {
                if (dist[v] == SIZE_MAX) {
                    dist[v] = dist[u] + 1;
                    parent[v] = u;
                    queue.push_back(v);
                } else if (v != parent[u] && dist[u] + dist[v] + 1 < best) {
                    best = dist[u] + dist[v] + 1;
                    std::vector<std::size_t> left, right;
                    for (std::size_t x = u; x != SIZE_MAX; x = parent[x]) left.push_back(x);
                    for (std::size_t x = v; x != SIZE_MAX; x = parent[x]) right.push_back(x);
                    best_cycle.assign(left.rbegin(), left.rend());
                    best_cycle.insert(best_cycle.end(), right.begin(), right.end() - 1);
                }
            }
        }
    }
    if (best != SIZE_MAX && best / 2 <= n) {
        std::string w;
        for (std::size_t x : best_cycle) {
            if (!w.empty()) w += " - ";
            w += x < nw ? m.worlds()[x] : name(classes[x - nw]);
        }
        return Report::fail(prop, "cycle through " + std::to_string(best / 2) + " classes: " + w);
    }
    return Report::pass(prop);
}

bool threshold_equal(std::size_t a, std::size_t b, std::size_t d) { return a == b || (a >= d && b >= d); }

bool threshold_equiv(const SetTuple& p, const SetTuple& q, std::size_t d)
{
    if (p.sets.size() != q.sets.size()) throw ModelError("threshold_equiv needs tuples of equal length");
    if (p.sets.size() > 16) throw ModelError("threshold_equiv is capped at 16 sets");
    if (p.universe > 64 || q.universe > 64) throw ModelError("universes are capped at 64 elements");
    auto cells = [](const SetTuple& t) {
        for (InfoState s : t.sets)
            if (!s.subset_of(InfoState::full(t.universe))) throw ModelError("set leaves its universe");
        std::vector<std::size_t> count(std::size_t{1} << t.sets.size(), 0);
        for (std::size_t x = 0; x < t.universe; ++x) {
            std::size_t mask = 0;
            for (std::size_t i = 0; i < t.sets.size(); ++i)
                if (t.sets[i].contains(x)) mask |= std::size_t{1} << i;
            ++count[mask];
        }
        return count;
    };
    const auto cp = cells(p), cq = cells(q);
    for (std::size_t i = 0; i < cp.size(); ++i)
        if (!threshold_equal(cp[i], cq[i], d)) return false;
    return true;
}

}   // namespace inqkit
