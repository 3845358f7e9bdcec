#pragma once

#include <string>
#include <vector>

#include "epos/certificates.hpp"
#include "epos/graph.hpp"

namespace epos {

/// Hypotheses checked exhaustively against labels.
///  co_triangle_free: α <= 2 ⇒ e-positive
///  alpha:            α = ceil(n/2)+1 ⇒ not e-positive, and the certificate holds
///  clawfree_ccfree:  no induced claw and not claw-contractible ⇒ e-positive
enum class Condition { co_triangle_free, alpha, clawfree_ccfree };

Condition parse_condition(const std::string& s);
std::string to_string(Condition c);

bool hypothesis_holds(Condition c, const Graph& g);

/// Empty when the graph is consistent with the condition, else the reason.
std::string check_condition(Condition c, const Graph& g, bool e_positive, WitnessFamily family);

}  // namespace epos
