#pragma once

#include <string>
#include <string_view>

#include "credal/model.hpp"

namespace credal {

/// Parses a JSON network file:
///   { "variables": [{"name": "X1", "card": 2}, ...],
///     "arcs": [[parent, child], ...],
///     "cpts": [ [ {"parent_config": [..], "extrema": [["2/5","3/5"], ...],
///                  "facets": [{"coefficients": [..], "bound": "1/2",
///                              "equality": false}] }, ... ], ... ] }
/// Rationals are "num/den" strings or integers. Each node's cpt list must
/// hold one entry per parent configuration; entries may appear in any order.
/// Syntax errors carry the byte offset. The result is validated.
CredalNetwork parse_network(std::string_view text);

/// Syntax and shape checks only; pair with validate_network.
CredalNetwork parse_network_unvalidated(std::string_view text);

/// Inverse of parse_network, rationals in lowest terms, configurations in
/// canonical order. Output is deterministic.
std::string serialize_network(const CredalNetwork& net, int indent = 1);

/// Query file: {"query": 2, "f": ["1","0"], "evidence": {"2": 0},
///              "bound": "lower"}
GbrTask parse_task(std::string_view text);
std::string serialize_task(const GbrTask& task, int indent = 1);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace credal
