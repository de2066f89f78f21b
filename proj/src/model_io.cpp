#include "inqkit/model_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace inqkit {

namespace {

std::vector<std::string> tokenize(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) out.push_back(std::move(cur));
        cur.clear();
    };
    for (char c : line) {
        if (c == '#') break;
        if (std::isspace(static_cast<unsigned char>(c))) {
            flush();
        } else if (c == '{' || c == '}' || c == ',' || c == ':') {
            flush();
            out.emplace_back(1, c);
        } else {
            cur += c;
        }
    }
    flush();
    return out;
}

class LineError {
public:
    explicit LineError(std::size_t line) : line_(line) {}
    [[noreturn]] void operator()(const std::string& msg) const
    {
        throw ModelError("line " + std::to_string(line_) + ": " + msg);
    }

private:
    std::size_t line_;
};

// Reads brace-delimited world lists starting at tokens[i].
std::vector<std::vector<std::string>> read_sets(const std::vector<std::string>& t, std::size_t i, const LineError& fail)
{
    std::vector<std::vector<std::string>> sets;
    while (i < t.size()) {
        if (t[i] != "{") fail("expected '{'");
        ++i;
        std::vector<std::string> set;
        bool want_item = true;
        while (true) {
            if (i >= t.size()) fail("unterminated state");
            if (t[i] == "}") {
                if (want_item && !set.empty()) fail("dangling ',' in state");
                ++i;
                break;
            }
            if (t[i] == ",") {
                if (want_item) fail("unexpected ','");
                want_item = true;
            } else {
                if (!want_item) fail("expected ',' between worlds");
                set.push_back(t[i]);
                want_item = false;
            }
            ++i;
        }
        sets.push_back(std::move(set));
    }
    return sets;
}

InfoState to_state(const std::vector<std::string>& ids, const std::vector<std::string>& worlds, const LineError& fail)
{
    InfoState s;
    for (const auto& id : ids) {
        auto it = std::find(worlds.begin(), worlds.end(), id);
        if (it == worlds.end()) fail("unknown world '" + id + "'");
        s.insert(static_cast<std::size_t>(it - worlds.begin()));
    }
    return s;
}

}   // namespace

InfoState parse_state(const std::string& text, const std::vector<std::string>& worlds)
{
    LineError fail(1);
    auto sets = read_sets(tokenize(text), 0, fail);
    if (sets.size() != 1) fail("expected exactly one state");
    return to_state(sets.front(), worlds, fail);
}

ModelFile read_model(std::istream& in, ReadOptions opts)
{
    ModelSpec spec;
    spec.allow_trivial = opts.allow_trivial;
    std::string name;
    struct StateLine {
        std::string id;
        std::vector<std::string> worlds;
        std::size_t line;
    };
    struct EdgeLine {
        std::string agent, world, state;
        std::size_t line;
    };
    std::vector<StateLine> states;
    std::vector<EdgeLine> edges;
    std::vector<std::string> point_tokens;
    std::size_t point_line = 0;
    bool saw_sigma = false;

    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        LineError fail(no);
        auto t = tokenize(line);
        if (t.empty()) continue;
        const std::string& kw = t[0];
        if (kw == "model") {
            if (t.size() != 2) fail("expected 'model <name>'");
            name = t[1];
        } else if (kw == "agents") {
            spec.agents.insert(spec.agents.end(), t.begin() + 1, t.end());
        } else if (kw == "atoms") {
            spec.atoms.insert(spec.atoms.end(), t.begin() + 1, t.end());
        } else if (kw == "world") {
            if (t.size() < 2) fail("expected 'world <id> [atoms]'");
            spec.worlds.push_back({t[1], std::vector<std::string>(t.begin() + 2, t.end())});
        } else if (kw == "sigma") {
            if (t.size() < 4 || t[3] != ":") fail("expected 'sigma <agent> <world> : {..} ...'");
            spec.sigma.push_back({t[1], t[2], read_sets(t, 4, fail)});
            saw_sigma = true;
        } else if (kw == "state") {
            if (t.size() < 3) fail("expected 'state <id> {..}'");
            auto sets = read_sets(t, 2, fail);
            if (sets.size() != 1) fail("a state line lists exactly one state");
            states.push_back({t[1], sets.front(), no});
        } else if (kw == "edge") {
            if (t.size() != 4) fail("expected 'edge <agent> <world> <state-id>'");
            edges.push_back({t[1], t[2], t[3], no});
        } else if (kw == "point") {
            point_tokens.assign(t.begin() + 1, t.end());
            point_line = no;
        } else {
            fail("unknown directive '" + kw + "'");
        }
    }

    ModelFile file;
    file.name = name.empty() ? "model" : name;
    const bool relational = !states.empty() || !edges.empty();
    if (relational && saw_sigma) throw ModelError("a file cannot mix sigma lines with state and edge lines");

    std::vector<std::string> world_labels;
    for (const auto& w : spec.worlds) world_labels.push_back(w.label);

    if (relational) {
        Structure s;
        s.worlds = world_labels;
        s.agents = spec.agents;
        s.atoms = spec.atoms;
        if (s.worlds.size() > max_worlds) throw ModelError("model exceeds " + std::to_string(max_worlds) + " worlds");
        std::set<std::string> seen;
        for (const auto& w : s.worlds)
            if (!seen.insert(w).second) throw ModelError("duplicate world '" + w + "'");
        s.valuation.assign(s.atoms.size(), InfoState{});
        for (std::size_t w = 0; w < spec.worlds.size(); ++w) {
            for (const auto& a : spec.worlds[w].true_atoms) {
                auto it = std::find(s.atoms.begin(), s.atoms.end(), a);
                if (it == s.atoms.end()) throw ModelError("unknown atom '" + a + "'");
                s.valuation[static_cast<std::size_t>(it - s.atoms.begin())].insert(w);
            }
        }
        std::map<std::string, std::size_t> state_index;
        for (const auto& st : states) {
            LineError fail(st.line);
            if (!state_index.emplace(st.id, s.states.size()).second) fail("duplicate state id '" + st.id + "'");
            s.states.push_back(to_state(st.worlds, s.worlds, fail));
            s.state_labels.push_back(st.id);
        }
        s.edges.assign(s.agents.size(), std::vector<std::vector<std::size_t>>(s.worlds.size()));
        for (const auto& e : edges) {
            LineError fail(e.line);
            auto a = std::find(s.agents.begin(), s.agents.end(), e.agent);
            if (a == s.agents.end()) fail("unknown agent '" + e.agent + "'");
            auto w = s.find_world(e.world);
            if (!w) fail("unknown world '" + e.world + "'");
            auto si = state_index.find(e.state);
            if (si == state_index.end()) fail("unknown state id '" + e.state + "'");
            auto& row = s.edges[static_cast<std::size_t>(a - s.agents.begin())][*w];
            row.push_back(si->second);
        }
        for (auto& per_agent : s.edges) {
            for (auto& row : per_agent) {
                std::sort(row.begin(), row.end());
                row.erase(std::unique(row.begin(), row.end()), row.end());
            }
        }
        if (!point_tokens.empty()) {
            LineError fail(point_line);
            if (point_tokens.size() == 2 && point_tokens[0] == "world") {
                auto w = s.find_world(point_tokens[1]);
                if (!w) fail("unknown world '" + point_tokens[1] + "'");
                file.point = WorldPoint{*w};
            } else if (point_tokens.size() == 2 && point_tokens[0] == "state") {
                auto si = state_index.find(point_tokens[1]);
                if (si == state_index.end()) fail("unknown state id '" + point_tokens[1] + "'");
                file.point = s.states[si->second];
            } else if (point_tokens.size() > 1 && point_tokens[0] == "state") {
                auto sets = read_sets(point_tokens, 1, fail);
                if (sets.size() != 1) fail("expected one state");
                file.point = to_state(sets.front(), s.worlds, fail);
            } else {
                fail("expected 'point world <id>' or 'point state {..}'");
            }
        }
        file.model = std::move(s);
        return file;
    }

    InqModel m = build_model(spec);
    if (!point_tokens.empty()) {
        LineError fail(point_line);
        if (point_tokens.size() == 2 && point_tokens[0] == "world") {
            auto w = m.find_world(point_tokens[1]);
            if (!w) fail("unknown world '" + point_tokens[1] + "'");
            file.point = WorldPoint{*w};
        } else if (point_tokens.size() > 1 && point_tokens[0] == "state") {
            auto sets = read_sets(point_tokens, 1, fail);
            if (sets.size() != 1) fail("expected one state");
            file.point = to_state(sets.front(), m.worlds(), fail);
        } else {
            fail("expected 'point world <id>' or 'point state {..}'");
        }
    }
    file.model = std::move(m);
    return file;
}

ModelFile read_model_text(const std::string& text, ReadOptions opts)
{
    std::istringstream in(text);
    return read_model(in, opts);
}

ModelFile read_model_file(const std::string& path, ReadOptions opts)
{
    std::ifstream in(path);
    if (!in) throw ModelError("cannot open '" + path + "'");
    return read_model(in, opts);
}

namespace {

void write_header(std::ostream& out, const std::string& name, const std::vector<std::string>& agents,
                  const std::vector<std::string>& atoms)
{
    out << "# inqkit " << version << "\n";
    out << "model " << name << "\n";
    out << "agents";
    for (const auto& a : agents) out << ' ' << a;
    out << "\natoms";
    for (const auto& p : atoms) out << ' ' << p;
    out << "\n";
}

void write_worlds(std::ostream& out, const std::vector<std::string>& worlds, const std::vector<std::string>& atoms,
                  const std::vector<InfoState>& valuation)
{
    for (std::size_t w = 0; w < worlds.size(); ++w) {
        out << "world " << worlds[w];
        for (std::size_t p = 0; p < atoms.size(); ++p)
            if (valuation[p].contains(w)) out << ' ' << atoms[p];
        out << "\n";
    }
}

void write_point(std::ostream& out, const std::optional<Point>& point, const std::vector<std::string>& worlds)
{
    if (!point) return;
    if (const auto* w = std::get_if<WorldPoint>(&*point))
        out << "point world " << worlds.at(w->world) << "\n";
    else
        out << "point state " << format_state(std::get<InfoState>(*point), worlds) << "\n";
}

}   // namespace

void write_model(std::ostream& out, const InqModel& m, const std::string& name, const std::optional<Point>& point)
{
    std::vector<InfoState> val;
    for (std::size_t p = 0; p < m.atom_count(); ++p) val.push_back(m.valuation(p));
    write_header(out, name, m.agents(), m.atoms());
    write_worlds(out, m.worlds(), m.atoms(), val);
    for (std::size_t a = 0; a < m.agent_count(); ++a)
        for (std::size_t w = 0; w < m.world_count(); ++w)
            out << "sigma " << m.agents()[a] << ' ' << m.worlds()[w] << " : "
                << format_inqstate(m.sigma(a, w), m.worlds()) << "\n";
    write_point(out, point, m.worlds());
}

void write_structure(std::ostream& out, const Structure& s, const std::string& name, const std::optional<Point>& point)
{
    Structure labelled = s;
    labelled.default_state_labels();
    write_header(out, name, s.agents, s.atoms);
    write_worlds(out, s.worlds, s.atoms, s.valuation);
    for (std::size_t i = 0; i < s.states.size(); ++i)
        out << "state " << labelled.state_labels[i] << ' ' << format_state(s.states[i], s.worlds) << "\n";
    for (std::size_t a = 0; a < s.agents.size(); ++a)
        for (std::size_t w = 0; w < s.worlds.size(); ++w)
            for (std::size_t i : s.edges[a][w])
                out << "edge " << s.agents[a] << ' ' << s.worlds[w] << ' ' << labelled.state_labels[i] << "\n";
    write_point(out, point, s.worlds);
}

namespace {

std::string quote(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

bool is_partition_agent(const InqModel& m, std::size_t a)
{
    for (std::size_t w = 0; w < m.world_count(); ++w) {
        InfoState k = m.knowledge(a, w);
        if (!k.contains(w)) return false;
        bool same = true;
        k.for_each([&](std::size_t v) { same = same && m.sigma(a, v) == m.sigma(a, w); });
        if (!same) return false;
    }
    return true;
}

}   // namespace

std::string export_dot(const InqModel& m, const std::string& name)
{
    std::ostringstream out;
    out << "// inqkit " << version << "\n";
    out << "digraph " << quote(name) << " {\n";
    out << "  node [shape=ellipse];\n";

    std::optional<std::size_t> cluster_agent;
    for (std::size_t a = 0; a < m.agent_count() && !cluster_agent; ++a)
        if (is_partition_agent(m, a)) cluster_agent = a;

    auto node_label = [&](std::size_t w) {
        std::string label = m.worlds()[w];
        std::string atoms;
        for (std::size_t p = 0; p < m.atom_count(); ++p)
            if (m.holds(p, w)) atoms += (atoms.empty() ? "" : ",") + m.atoms()[p];
        return quote(m.worlds()[w]) + " [label=" + quote(label + (atoms.empty() ? "" : "\\n" + atoms)) + "];";
    };

    InfoState placed;
    if (cluster_agent) {
        const std::size_t a = *cluster_agent;
        std::size_t cls = 0;
        for (std::size_t w = 0; w < m.world_count(); ++w) {
            InfoState k = m.knowledge(a, w);
            if (k.first() != w) continue;
            const auto& maxi = m.sigma(a, w).maximal();
            bool disjoint = true;
            for (std::size_t i = 0; i < maxi.size(); ++i)
                for (std::size_t j = i + 1; j < maxi.size(); ++j) disjoint = disjoint && !maxi[i].intersects(maxi[j]);
            out << "  subgraph cluster_" << cls << " {\n";
            out << "    style=dashed; label=" << quote(m.agents()[a] + ": " + format_state(k, m.worlds())) << ";\n";
            if (disjoint) {
                for (std::size_t i = 0; i < maxi.size(); ++i) {
                    if (maxi[i].empty()) continue;
                    out << "    subgraph cluster_" << cls << "_" << i << " {\n      style=solid; label=\"\";\n";
                    maxi[i].for_each([&](std::size_t v) { out << "      " << node_label(v) << "\n"; });
                    out << "    }\n";
                }
            } else {
                for (std::size_t i = 0; i < maxi.size(); ++i) {
                    std::string id = "max_" + std::to_string(cls) + "_" + std::to_string(i);
                    out << "    " << id << " [shape=box, label=" << quote(format_state(maxi[i], m.worlds())) << "];\n";
                }
            }
            k.for_each([&](std::size_t v) {
                bool inner = disjoint && std::any_of(maxi.begin(), maxi.end(), [&](InfoState s) { return s.contains(v); });
                if (!inner) out << "    " << node_label(v) << "\n";
            });
            out << "  }\n";
            if (!disjoint) {
                for (std::size_t i = 0; i < maxi.size(); ++i)
                    maxi[i].for_each([&](std::size_t v) {
                        out << "  max_" << cls << "_" << i << " -> " << quote(m.worlds()[v]) << " [arrowhead=none];\n";
                    });
            }
            placed |= k;
            ++cls;
        }
    }
    for (std::size_t w = 0; w < m.world_count(); ++w)
        if (!placed.contains(w)) out << "  " << node_label(w) << "\n";
    for (std::size_t a = 0; a < m.agent_count(); ++a) {
        if (cluster_agent && *cluster_agent == a) continue;
        for (std::size_t w = 0; w < m.world_count(); ++w)
            m.knowledge(a, w).for_each([&](std::size_t v) {
                out << "  " << quote(m.worlds()[w]) << " -> " << quote(m.worlds()[v]) << " [style=dashed, label="
                    << quote(m.agents()[a]) << "];\n";
            });
    }
    out << "}\n";
    return out.str();
}

}   // namespace inqkit
