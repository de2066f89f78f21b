#include "inqkit/model.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace inqkit {

namespace {

std::optional<std::size_t> find_in(const std::vector<std::string>& v, const std::string& x)
{
    auto it = std::find(v.begin(), v.end(), x);
    if (it == v.end()) return std::nullopt;
    return static_cast<std::size_t>(it - v.begin());
}

void require_unique(const std::vector<std::string>& names, const char* what)
{
    std::set<std::string> seen;
    for (const auto& n : names)
        if (!seen.insert(n).second) throw ModelError(std::string("duplicate ") + what + " '" + n + "'");
}

}   // namespace

InqModel::InqModel(std::vector<std::string> worlds, std::vector<std::string> agents, std::vector<std::string> atoms,
                   std::vector<std::vector<InqState>> sigma, std::vector<InfoState> valuation)
    : worlds_(std::move(worlds)), agents_(std::move(agents)), atoms_(std::move(atoms)), sigma_(std::move(sigma)),
      valuation_(std::move(valuation))
{
    if (worlds_.size() > max_worlds) throw ModelError("model exceeds " + std::to_string(max_worlds) + " worlds");
    require_unique(worlds_, "world");
    require_unique(agents_, "agent");
    require_unique(atoms_, "atom");
    if (sigma_.size() != agents_.size()) throw ModelError("sigma table does not match agent count");
    if (valuation_.size() != atoms_.size()) throw ModelError("valuation does not match atom count");
    const InfoState all = all_worlds();
    for (const auto& row : sigma_) {
        if (row.size() != worlds_.size()) throw ModelError("sigma table does not match world count");
        for (const auto& st : row)
            if (!st.union_state().subset_of(all)) throw ModelError("sigma refers to a world outside the model");
    }
    for (InfoState v : valuation_)
        if (!v.subset_of(all)) throw ModelError("valuation refers to a world outside the model");
}

std::optional<std::size_t> InqModel::find_world(const std::string& label) const { return find_in(worlds_, label); }
std::optional<std::size_t> InqModel::find_agent(const std::string& name) const { return find_in(agents_, name); }
std::optional<std::size_t> InqModel::find_atom(const std::string& name) const { return find_in(atoms_, name); }

std::size_t InqModel::world_index(const std::string& label) const
{
    if (auto i = find_world(label)) return *i;
    throw ModelError("unknown world '" + label + "'");
}

std::size_t InqModel::agent_index(const std::string& name) const
{
    if (auto i = find_agent(name)) return *i;
    throw ModelError("unknown agent '" + name + "'");
}

InqModel build_model(const ModelSpec& spec)
{
    std::vector<std::string> worlds;
    for (const auto& w : spec.worlds) worlds.push_back(w.label);
    if (worlds.empty()) throw ModelError("model has no worlds");
    if (spec.agents.empty()) throw ModelError("model declares no agents");
    require_unique(worlds, "world");
    require_unique(spec.agents, "agent");
    require_unique(spec.atoms, "atom");

    auto world_of = [&](const std::string& label) {
        if (auto i = find_in(worlds, label)) return *i;
        throw ModelError("unknown world '" + label + "'");
    };

    std::vector<InfoState> valuation(spec.atoms.size());
    for (std::size_t w = 0; w < spec.worlds.size(); ++w) {
        for (const auto& a : spec.worlds[w].true_atoms) {
            auto i = find_in(spec.atoms, a);
            if (!i) throw ModelError("unknown atom '" + a + "' at world '" + worlds[w] + "'");
            valuation[*i].insert(w);
        }
    }

    std::map<std::pair<std::size_t, std::size_t>, std::vector<InfoState>> gens;
    for (const auto& s : spec.sigma) {
        auto a = find_in(spec.agents, s.agent);
        if (!a) throw ModelError("unknown agent '" + s.agent + "'");
        std::size_t w = world_of(s.world);
        auto& g = gens[{*a, w}];
        for (const auto& st : s.states) {
            InfoState bits;
            for (const auto& x : st) bits.insert(world_of(x));
            g.push_back(bits);
        }
    }

    std::vector<std::vector<InqState>> sigma(spec.agents.size(), std::vector<InqState>(worlds.size()));
    for (std::size_t a = 0; a < spec.agents.size(); ++a) {
        for (std::size_t w = 0; w < worlds.size(); ++w) {
            auto it = gens.find({a, w});
            if (it == gens.end() || it->second.empty()) {
                if (!spec.allow_trivial)
                    throw ModelError("no maximal states given for agent '" + spec.agents[a] + "' at world '" +
                                     worlds[w] + "'");
                continue;
            }
            sigma[a][w] = InqState::from_generators(it->second);
        }
    }
    return InqModel(std::move(worlds), spec.agents, spec.atoms, std::move(sigma), std::move(valuation));
}

KripkeModel kripke_reduct(const InqModel& m)
{
    KripkeModel k;
    k.worlds = m.worlds();
    k.agents = m.agents();
    k.atoms = m.atoms();
    k.successors.assign(m.agent_count(), std::vector<InfoState>(m.world_count()));
    for (std::size_t a = 0; a < m.agent_count(); ++a)
        for (std::size_t w = 0; w < m.world_count(); ++w) k.successors[a][w] = m.knowledge(a, w);
    for (std::size_t p = 0; p < m.atom_count(); ++p) k.valuation.push_back(m.valuation(p));
    return k;
}

std::string format_point(const Point& p, const std::vector<std::string>& labels)
{
    if (const auto* w = std::get_if<WorldPoint>(&p)) return labels.at(w->world);
    return format_state(std::get<InfoState>(p), labels);
}

}   // namespace inqkit
