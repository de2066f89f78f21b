#include "inqkit/validate.hpp"

#include "inqkit/epistemic.hpp"
#include "inqkit/model_io.hpp"
#include "inqkit/transforms.hpp"

#include <algorithm>
#include <regex>

namespace inqkit {

Property parse_property(const std::string& text, const std::vector<std::string>& worlds)
{
    static const std::regex plain(R"(relational-valid|s5|simple|downward-closed)");
    static const std::regex counted(R"((K-rich|N-acyclic)\((\d+)\))");
    static const std::regex strat(R"(stratified\((\d+)(?:,\s*(.+))?\))");
    std::smatch m;
    Property p;
    if (std::regex_match(text, m, plain)) {
        p.kind = text == "relational-valid" ? PropertyKind::relational_valid
                 : text == "s5"             ? PropertyKind::s5
                 : text == "simple"         ? PropertyKind::simple
                                            : PropertyKind::downward_closed;
    } else if (std::regex_match(text, m, counted)) {
        p.kind = m[1] == "K-rich" ? PropertyKind::k_rich : PropertyKind::n_acyclic;
        p.param = std::stoul(m[2]);
    } else if (std::regex_match(text, m, strat)) {
        p.kind = PropertyKind::stratified;
        p.param = std::stoul(m[1]);
        if (m[2].matched) {
            std::string at = m[2];
            if (!at.empty() && at.front() == '{') {
                p.point = parse_state(at, worlds);
            } else {
                auto it = std::find(worlds.begin(), worlds.end(), at);
                if (it == worlds.end()) throw ModelError("unknown world '" + at + "' in property");
                p.point = WorldPoint{static_cast<std::size_t>(it - worlds.begin())};
            }
        }
    } else {
        throw ModelError("unknown property '" + text + "'");
    }
    return p;
}

std::string property_name(const Property& p)
{
    switch (p.kind) {
    case PropertyKind::relational_valid: return "relational-valid";
    case PropertyKind::s5: return "s5";
    case PropertyKind::simple: return "simple";
    case PropertyKind::downward_closed: return "downward-closed";
    case PropertyKind::k_rich: return "K-rich(" + std::to_string(p.param) + ")";
    case PropertyKind::n_acyclic: return "N-acyclic(" + std::to_string(p.param) + ")";
    case PropertyKind::stratified: return "stratified(" + std::to_string(p.param) + ")";
    }
    return "?";
}

namespace {

Report epistemic_check(const InqModel& m, const Property& p)
{
    switch (p.kind) {
    case PropertyKind::s5: return check_s5(m);
    case PropertyKind::simple: return check_simple(m);
    case PropertyKind::k_rich: return check_k_rich(m, p.param);
    case PropertyKind::n_acyclic: return check_n_acyclic(m, p.param);
    default: return Report::fail(property_name(p), "not an epistemic property");
    }
}

}   // namespace

Report validate(const InqModel& m, const Property& p)
{
    const std::string prop = property_name(p);
    try {
        switch (p.kind) {
        case PropertyKind::relational_valid:
            return check_relational(encode_relational(m, EncodeMode::minimal).structure());
        case PropertyKind::downward_closed:
            // Σ is stored by its maxima; they must form an antichain.
            for (std::size_t a = 0; a < m.agent_count(); ++a)
                for (std::size_t w = 0; w < m.world_count(); ++w) {
                    const auto& mx = m.sigma(a, w).maximal();
                    for (std::size_t i = 0; i < mx.size(); ++i)
                        for (std::size_t j = 0; j < mx.size(); ++j)
                            if (i != j && mx[i].subset_of(mx[j]))
                                return Report::fail(prop, "Sigma_" + m.agents()[a] + "(" + m.worlds()[w] +
                                                              ") lists a non-maximal generator");
                }
            return Report::pass(prop);
        case PropertyKind::stratified: {
            if (!p.point) return Report::fail(prop, "no point given");
            std::optional<InfoState> sp;
            if (auto* s = std::get_if<InfoState>(&*p.point)) sp = *s;
            RelationalModel r = encode_relational(m, EncodeMode::minimal, sp);
            Point at = *p.point;
            return check_stratified(r.structure(), at, p.param);
        }
        default: return epistemic_check(m, p);
        }
    } catch (const ModelError& e) {
        return Report::fail(prop, e.what());
    }
}

Report validate(const Structure& s, const Property& p)
{
    const std::string prop = property_name(p);
    try {
        switch (p.kind) {
        case PropertyKind::relational_valid: return check_relational(s);
        case PropertyKind::downward_closed:
            for (std::size_t a = 0; a < s.agents.size(); ++a)
                for (std::size_t w = 0; w < s.worlds.size(); ++w)
                    for (std::size_t i : s.edges[a][w]) {
                        std::optional<std::string> bad;
                        for_each_subset(s.states[i], [&](InfoState t) {
                            if (bad) return;
                            auto j = s.find_state(t);
                            if (!j || !s.edge(a, w, *j)) bad = format_state(t, s.worlds);
                        });
                        if (bad)
                            return Report::fail(prop, "E_" + s.agents[a] + "[" + s.worlds[w] + "] contains " +
                                                          format_state(s.states[i], s.worlds) + " but not its subset " + *bad);
                    }
            return Report::pass(prop);
        case PropertyKind::stratified:
            if (!p.point) return Report::fail(prop, "no point given");
            return check_stratified(s, *p.point, p.param);
        default: {
            Report r = check_relational(s);
            if (!r) return Report::fail(prop, "not a relational model: " + r.witness);
            return epistemic_check(decode_relational(RelationalModel::from_structure(s)), p);
        }
        }
    } catch (const ModelError& e) {
        return Report::fail(prop, e.what());
    }
}

}   // namespace inqkit
