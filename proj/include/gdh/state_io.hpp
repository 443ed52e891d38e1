#pragma once

#include <string>

#include "gdh/wave.hpp"

namespace gdh {

struct SavedState {
    HierarchyState st;
    ESeries phi;
    bool has_phi = false;
};

// JSON image of a solved state (spec + operator coefficients, optionally the
// wave logarithm). Term order follows the series' own lexicographic maps, so
// the output is byte-stable for equal states.
std::string state_to_json(const HierarchyState& st, const ESeries* phi = nullptr);
SavedState state_from_json(const std::string& text);

void save_state(const std::string& path, const HierarchyState& st, const ESeries* phi = nullptr);
SavedState load_state(const std::string& path);

// Continuation to a larger truncation envelope. The hierarchy is re-solved at
// `target` and every monomial inside the common envelope is cross-checked
// against `base`; any disagreement throws. Re-solving keeps the layer-by-layer
// cross-flow consistency checks in force for the new region, which a purely
// incremental fill would bypass.
HierarchyState extend_state(const HierarchyState& base, const TruncationSpec& target);

}  // namespace gdh
