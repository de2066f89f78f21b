#pragma once

#include "inqkit/model.hpp"
#include "inqkit/report.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace inqkit {

// Number of game rounds; an empty value means the full (unbounded) game.
struct Depth {
    std::optional<std::size_t> rounds;
    static Depth full() { return {}; }
    static Depth of(std::size_t n) { return {n}; }
    bool is_full() const { return !rounds; }
};

// Relation between the worlds of a left and a right model; rows[w] holds the
// right-hand partners of left world w.
struct WorldRelation {
    std::vector<InfoState> rows;
    bool related(std::size_t l, std::size_t r) const { return rows[l].contains(r); }
    bool operator==(const WorldRelation&) const = default;
};

// Some member of s is unmatched in t or vice versa, under y.
bool lifted(const WorldRelation& y, InfoState s, InfoState t);

class BisimLayers {
public:
    BisimLayers(const InqModel& left, const InqModel& right, Depth depth);

    // Y_n; past the fixpoint every layer equals the fixpoint.
    const WorldRelation& layer(std::size_t n) const;
    const WorldRelation& at(Depth d) const;
    std::size_t computed() const { return layers_.size(); }
    bool stabilized() const { return stable_; }

    const InqModel& left() const { return *left_; }
    const InqModel& right() const { return *right_; }
    // Right-model agent matching left agent a.
    std::size_t right_agent(std::size_t a) const { return agent_map_[a]; }
    bool atom_equivalent(std::size_t l, std::size_t r) const { return layers_.front().related(l, r); }
    std::optional<std::string> atom_difference(std::size_t l, std::size_t r) const;

private:
    WorldRelation step(const WorldRelation& y) const;

    const InqModel* left_;
    const InqModel* right_;
    std::vector<std::size_t> agent_map_;
    std::vector<WorldRelation> layers_;
    bool stable_ = false;
};

bool equiv(const PointedModel& a, const PointedModel& b, Depth d);

// Class ids of ∼ⁿ (or full bisimilarity) within one model, numbered by first occurrence.
std::vector<std::size_t> world_classes(const InqModel& m, Depth d);
std::vector<std::size_t> world_classes(const BisimLayers& self_layers, Depth d);

enum class Side { left, right };

struct StatePosition;

// Claims that the worlds are not related at `rounds`.  Either they differ on an
// atom, or player I challenges with a state and every answer of II is listed.
struct WorldPosition {
    std::size_t left = 0;
    std::size_t right = 0;
    std::size_t rounds = 0;
    std::optional<std::string> mismatch;
    std::size_t agent = 0;
    Side side = Side::left;
    InfoState challenge;
    std::vector<StatePosition> replies;
};

// Claims the states are not lifted-related at `rounds`; I picks a world, and
// every answer of II leads to a losing world position.  No replies: II is stuck.
struct StatePosition {
    InfoState left;
    InfoState right;
    std::size_t rounds = 0;
    Side side = Side::left;
    std::size_t challenge = 0;
    std::vector<WorldPosition> replies;
};

struct Transcript {
    std::variant<WorldPosition, StatePosition> root;
};

inline constexpr std::size_t transcript_node_cap = 200000;

// A winning strategy for I, choosing the least winning move at each step;
// empty when the points are equivalent at depth d.
std::optional<Transcript> distinguishing_play(const PointedModel& a, const PointedModel& b, Depth d);

// Re-derives every claim of the transcript from freshly computed layers.
Report verify_transcript(const Transcript& t, const PointedModel& a, const PointedModel& b);

std::string render_transcript(const Transcript& t, const InqModel& left, const InqModel& right);

// True when y relates only atom-equivalent worlds and satisfies back and forth
// for every agent; the witness names the first failing pair.
Report check_world_bisimulation(const InqModel& left, const InqModel& right, const WorldRelation& y);

}   // namespace inqkit
