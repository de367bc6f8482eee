#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bridgescope/backend.hpp"

namespace bs {

// One step of the adaptation mini-language. Steps are pure and closed: no
// tool invocation, no I/O, no arbitrary code.
struct TransformStep {
    enum class Kind { Identity, Project, Rename, Pick, Concat };
    Kind kind = Kind::Identity;
    std::vector<std::string> fields;                            // project
    std::vector<std::pair<std::string, std::string>> mapping;   // rename, old -> new
    json path = json::array();                                  // pick: keys / indexes
};

// An ordered pipeline, applied left to right. Empty pipeline = identity.
using TransformSpec = std::vector<TransformStep>;

// Parse the wire form: an array of step documents, e.g.
//   [{"kind":"project","fields":["x","y"]}, {"kind":"rename","mapping":{"x":"a"}}]
// Throws MalformedArgs for unknown kinds or missing parameters.
TransformSpec parse_transform(const json& spec);

// Apply the pipeline. Throws TransformError naming the failing step index
// when a step does not fit the actual value shape.
json apply_transform(const TransformSpec& spec, json input);

}  // namespace bs
