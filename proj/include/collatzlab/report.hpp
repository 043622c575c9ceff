#pragma once

#include <string>
#include <vector>

#include "collatzlab/json_io.hpp"

namespace collatzlab {

/// Envelope around every CLI result. Deterministic: no timestamps, ordered
/// keys, all numerals exact. `provenance` records which code path produced
/// each result family ("exact-branch-engine", "closed-form-model",
/// "finite-window-count", "orbit-cycle-analysis", "formal-derivation").
struct ReportEnvelope {
    std::string command;
    json parameters = json::object();
    json results = json::object();
    std::vector<std::string> assumptions;
    std::vector<std::string> provenance;
};

inline json to_json(const ReportEnvelope& r) {
    return json{{"command", r.command},
                {"parameters", r.parameters},
                {"results", r.results},
                {"assumptions", r.assumptions},
                {"provenance", r.provenance}};
}

} // namespace collatzlab
