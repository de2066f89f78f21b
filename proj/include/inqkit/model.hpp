#pragma once

#include "inqkit/info_state.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace inqkit {

// Raised for malformed models, unknown names, and violated size caps.
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InqModel {
public:
    InqModel() = default;
    // Takes sigma[agent][world] and valuation[atom]; checks dimensions and world bounds only.
    InqModel(std::vector<std::string> worlds, std::vector<std::string> agents, std::vector<std::string> atoms,
             std::vector<std::vector<InqState>> sigma, std::vector<InfoState> valuation);

    std::size_t world_count() const { return worlds_.size(); }
    std::size_t agent_count() const { return agents_.size(); }
    std::size_t atom_count() const { return atoms_.size(); }
    const std::vector<std::string>& worlds() const { return worlds_; }
    const std::vector<std::string>& agents() const { return agents_; }
    const std::vector<std::string>& atoms() const { return atoms_; }

    const InqState& sigma(std::size_t agent, std::size_t world) const { return sigma_[agent][world]; }
    InfoState knowledge(std::size_t agent, std::size_t world) const { return sigma_[agent][world].union_state(); }
    InfoState valuation(std::size_t atom) const { return valuation_[atom]; }
    bool holds(std::size_t atom, std::size_t world) const { return valuation_[atom].contains(world); }
    InfoState all_worlds() const { return InfoState::full(worlds_.size()); }

    std::optional<std::size_t> find_world(const std::string& label) const;
    std::optional<std::size_t> find_agent(const std::string& name) const;
    std::optional<std::size_t> find_atom(const std::string& name) const;
    std::size_t world_index(const std::string& label) const;   // throws ModelError
    std::size_t agent_index(const std::string& name) const;

    bool operator==(const InqModel&) const = default;

private:
    std::vector<std::string> worlds_;
    std::vector<std::string> agents_;
    std::vector<std::string> atoms_;
    std::vector<std::vector<InqState>> sigma_;
    std::vector<InfoState> valuation_;
};

struct ModelSpec {
    struct World {
        std::string label;
        std::vector<std::string> true_atoms;
    };
    struct Sigma {
        std::string agent;
        std::string world;
        std::vector<std::vector<std::string>> states;
    };
    std::vector<std::string> agents;
    std::vector<std::string> atoms;
    std::vector<World> worlds;
    std::vector<Sigma> sigma;
    // Accept (agent, world) pairs with no listed states and read them as {∅}.
    bool allow_trivial = false;
};

InqModel build_model(const ModelSpec& spec);

struct KripkeModel {
    std::vector<std::string> worlds;
    std::vector<std::string> agents;
    std::vector<std::string> atoms;
    std::vector<std::vector<InfoState>> successors;   // [agent][world]
    std::vector<InfoState> valuation;
};

KripkeModel kripke_reduct(const InqModel& m);

// A world or an info state of some model.
struct WorldPoint {
    std::size_t world;
    bool operator==(const WorldPoint&) const = default;
};
using Point = std::variant<WorldPoint, InfoState>;

struct PointedModel {
    const InqModel* model;
    Point point;
};

std::string format_point(const Point& p, const std::vector<std::string>& labels);

}   // namespace inqkit
