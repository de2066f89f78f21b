#pragma once

#include "inqkit/model.hpp"
#include "inqkit/relational.hpp"
#include "inqkit/report.hpp"

#include <optional>
#include <string>
#include <vector>

namespace inqkit {

enum class PropertyKind { relational_valid, s5, stratified, k_rich, simple, n_acyclic, downward_closed };

struct Property {
    PropertyKind kind = PropertyKind::s5;
    std::size_t param = 0;        // ℓ, K or N
    std::optional<Point> point;   // stratified only; falls back to the file's point
};

// relational-valid, s5, downward-closed, simple, K-rich(K), N-acyclic(N),
// stratified(ℓ) or stratified(ℓ,<world>|{w,...}).  Throws ModelError.
Property parse_property(const std::string& text, const std::vector<std::string>& worlds);
std::string property_name(const Property& p);

// Never throws on a failing property; the report carries the witness.
// An InqModel is validated through its minimal encoding where a relational
// property is asked for, and a structure through its decoding for the S5 ones.
Report validate(const InqModel& m, const Property& p);
Report validate(const Structure& s, const Property& p);

}   // namespace inqkit
