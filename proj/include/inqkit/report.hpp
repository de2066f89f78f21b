#pragma once

#include <string>

namespace inqkit {

// Outcome of a structural check; the witness names what failed.
struct Report {
    std::string property;
    bool ok = true;
    std::string witness;

    static Report pass(std::string property) { return {std::move(property), true, {}}; }
    static Report fail(std::string property, std::string witness)
    {
        return {std::move(property), false, std::move(witness)};
    }
    explicit operator bool() const { return ok; }
};

}   // namespace inqkit
