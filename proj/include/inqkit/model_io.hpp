#pragma once

#include "inqkit/model.hpp"
#include "inqkit/relational.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>

namespace inqkit {

inline constexpr const char* version = "0.1.0";

// Text format, one directive per line, '#' starts a comment:
//   model <name>
//   agents <a> ...        atoms <p> ...
//   world <id> [true atoms...]
//   sigma <agent> <world> : {w,...} {w,...}
//   point world <id>  |  point state {w,...}
// Relational files add
//   state <id> {w,...}
//   edge <agent> <world> <state-id>
// and carry no sigma lines.
struct ModelFile {
    std::string name;
    std::variant<InqModel, Structure> model;
    std::optional<Point> point;

    bool relational() const { return std::holds_alternative<Structure>(model); }
};

struct ReadOptions {
    bool allow_trivial = false;
};

ModelFile read_model(std::istream& in, ReadOptions opts = {});
ModelFile read_model_text(const std::string& text, ReadOptions opts = {});
ModelFile read_model_file(const std::string& path, ReadOptions opts = {});

// Parses "{w1,w2}" against world labels.
InfoState parse_state(const std::string& text, const std::vector<std::string>& worlds);

void write_model(std::ostream& out, const InqModel& m, const std::string& name,
                 const std::optional<Point>& point = std::nullopt);
void write_structure(std::ostream& out, const Structure& s, const std::string& name,
                     const std::optional<Point>& point = std::nullopt);

// Graphviz rendering: for the first agent with equivalence-class knowledge
// states, classes become dashed clusters and maximal states solid boxes;
// other agents are drawn as labelled accessibility edges.
std::string export_dot(const InqModel& m, const std::string& name);

}   // namespace inqkit
