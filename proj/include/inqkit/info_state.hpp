#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace inqkit {

// Worlds are indexed 0..n-1 and states are bit vectors over those indices.
inline constexpr std::size_t max_worlds = 64;

class InfoState {
public:
    constexpr InfoState() = default;
    constexpr explicit InfoState(std::uint64_t bits) : bits_(bits) {}

    static constexpr InfoState singleton(std::size_t w) { return InfoState(std::uint64_t{1} << w); }
    static constexpr InfoState full(std::size_t n)
    {
        return InfoState(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
    }

    constexpr std::uint64_t bits() const { return bits_; }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
    constexpr bool contains(std::size_t w) const { return (bits_ >> w) & 1u; }
    constexpr bool subset_of(InfoState o) const { return (bits_ & ~o.bits_) == 0; }
    constexpr bool intersects(InfoState o) const { return (bits_ & o.bits_) != 0; }

    constexpr void insert(std::size_t w) { bits_ |= std::uint64_t{1} << w; }
    constexpr void erase(std::size_t w) { bits_ &= ~(std::uint64_t{1} << w); }

    constexpr InfoState operator|(InfoState o) const { return InfoState(bits_ | o.bits_); }
    constexpr InfoState operator&(InfoState o) const { return InfoState(bits_ & o.bits_); }
    constexpr InfoState operator-(InfoState o) const { return InfoState(bits_ & ~o.bits_); }
    constexpr InfoState& operator|=(InfoState o) { bits_ |= o.bits_; return *this; }
    constexpr InfoState& operator&=(InfoState o) { bits_ &= o.bits_; return *this; }

    constexpr bool operator==(const InfoState&) const = default;
    constexpr auto operator<=>(const InfoState&) const = default;

    // Lowest member; undefined on the empty state.
    constexpr std::size_t first() const { return static_cast<std::size_t>(std::countr_zero(bits_)); }

    template <class F>
    constexpr void for_each(F&& f) const
    {
        for (std::uint64_t b = bits_; b != 0; b &= b - 1) f(static_cast<std::size_t>(std::countr_zero(b)));
    }

    std::vector<std::size_t> members() const;

private:
    std::uint64_t bits_ = 0;
};

// Calls f on every subset of s, the empty set first and s itself last.
template <class F>
void for_each_subset(InfoState s, F&& f)
{
    const std::uint64_t all = s.bits();
    std::uint64_t sub = 0;
    while (true) {
        f(InfoState(sub));
        if (sub == all) break;
        sub = (sub - all) & all;
    }
}

std::vector<InfoState> all_subsets(InfoState s);

// Downward-closed family of info states, kept as its antichain of maximal elements.
// Never empty: the smallest inquisitive state is {∅}.
class InqState {
public:
    InqState();   // {∅}
    static InqState from_generators(std::vector<InfoState> generators);

    const std::vector<InfoState>& maximal() const { return maximal_; }
    bool contains(InfoState s) const;
    InfoState union_state() const;
    bool is_trivial() const { return maximal_.size() == 1 && maximal_.front().empty(); }
    std::vector<InfoState> members() const;   // the whole downward closure, sorted
    bool subfamily_of(const InqState& other) const;

    bool operator==(const InqState&) const = default;

private:
    std::vector<InfoState> maximal_;
};

std::string format_state(InfoState s, const std::vector<std::string>& labels);
std::string format_inqstate(const InqState& st, const std::vector<std::string>& labels);

}   // namespace inqkit
