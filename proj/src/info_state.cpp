#include "inqkit/info_state.hpp"

#include <algorithm>
#include <set>

namespace inqkit {

std::vector<std::size_t> InfoState::members() const
{
    std::vector<std::size_t> out;
    out.reserve(size());
    for_each([&](std::size_t w) { out.push_back(w); });
    return out;
}

std::vector<InfoState> all_subsets(InfoState s)
{
    std::vector<InfoState> out;
    out.reserve(std::size_t{1} << s.size());
    for_each_subset(s, [&](InfoState t) { out.push_back(t); });
    std::sort(out.begin(), out.end());
    return out;
}

InqState::InqState() : maximal_{InfoState{}} {}

InqState InqState::from_generators(std::vector<InfoState> generators)
{
    InqState st;
    if (generators.empty()) return st;
    std::sort(generators.begin(), generators.end(),
              [](InfoState a, InfoState b) { return a.size() != b.size() ? a.size() > b.size() : a < b; });
    std::vector<InfoState> kept;
    for (InfoState g : generators) {
        bool covered = std::any_of(kept.begin(), kept.end(), [&](InfoState k) { return g.subset_of(k); });
        if (!covered) kept.push_back(g);
    }
    std::sort(kept.begin(), kept.end());
    st.maximal_ = std::move(kept);
    return st;
}

bool InqState::contains(InfoState s) const
{
    return std::any_of(maximal_.begin(), maximal_.end(), [&](InfoState m) { return s.subset_of(m); });
}

InfoState InqState::union_state() const
{
    InfoState u;
    for (InfoState m : maximal_) u |= m;
    return u;
}

std::vector<InfoState> InqState::members() const
{
    std::set<std::uint64_t> seen;
    for (InfoState m : maximal_) for_each_subset(m, [&](InfoState t) { seen.insert(t.bits()); });
    std::vector<InfoState> out;
    out.reserve(seen.size());
    for (auto b : seen) out.emplace_back(b);
    return out;
}

bool InqState::subfamily_of(const InqState& other) const
{
    return std::all_of(maximal_.begin(), maximal_.end(), [&](InfoState m) { return other.contains(m); });
}

std::string format_state(InfoState s, const std::vector<std::string>& labels)
{
    std::string out = "{";
    bool first = true;
    s.for_each([&](std::size_t w) {
        if (!first) out += ",";
        first = false;
        out += w < labels.size() ? labels[w] : std::to_string(w);
    });
    return out + "}";
}

std::string format_inqstate(const InqState& st, const std::vector<std::string>& labels)
{
    std::string out;
    for (InfoState m : st.maximal()) {
        if (!out.empty()) out += " ";
        out += format_state(m, labels);
    }
    return out;
}

}   // namespace inqkit
