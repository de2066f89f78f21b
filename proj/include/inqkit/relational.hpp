#pragma once

#include "inqkit/model.hpp"
#include "inqkit/report.hpp"

#include <optional>
#include <string>
#include <vector>

namespace inqkit {

// Two-sorted first-order structure (W, S, E_a, ε, P_i).  A second-sort element
// is identified by its index; states[i] is its ε-extension, so two elements may
// share an extension when the structure is not extensional.
struct Structure {
    std::vector<std::string> worlds;
    std::vector<std::string> agents;
    std::vector<std::string> atoms;
    std::vector<InfoState> states;
    std::vector<std::string> state_labels;
    std::vector<std::vector<std::vector<std::size_t>>> edges;   // [agent][world] -> sorted state indices
    std::vector<InfoState> valuation;                           // [atom]

    std::size_t element_count() const { return worlds.size() + states.size(); }
    bool edge(std::size_t agent, std::size_t world, std::size_t state) const;
    std::optional<std::size_t> find_state(InfoState extension) const;
    std::optional<std::size_t> find_world(const std::string& label) const;
    std::optional<std::size_t> find_state_label(const std::string& label) const;
    // Fills state_labels with s0, s1, ... where they are missing.
    void default_state_labels();
};

// The four relational-model conditions, checked in order: extensionality, local
// powerset, non-emptiness of E-images, downward closure of E-images.
Report check_relational(const Structure& s);

class RelationalModel {
public:
    // Throws ModelError carrying the failing witness.
    static RelationalModel from_structure(Structure s);

    const Structure& structure() const { return s_; }
    std::size_t world_count() const { return s_.worlds.size(); }
    std::size_t state_count() const { return s_.states.size(); }

private:
    explicit RelationalModel(Structure s) : s_(std::move(s)) {}
    Structure s_;
};

enum class EncodeMode { minimal, locally_full, full };

inline constexpr std::size_t full_encoding_world_cap = 16;

// A state point adds ℘(s) to the second sort.
RelationalModel encode_relational(const InqModel& m, EncodeMode mode, std::optional<InfoState> point = std::nullopt);
InqModel decode_relational(const RelationalModel& r);

// Removes the empty second-sort element; the result is never a relational model.
Structure drop_empty_state(const Structure& s);

// Copies of each part, united over one shared empty state.
Structure disjoint_sum(const std::vector<std::pair<const Structure*, std::size_t>>& parts);

std::string encode_mode_name(EncodeMode m);
EncodeMode parse_encode_mode(const std::string& s);

}   // namespace inqkit
