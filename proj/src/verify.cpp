#include "epos/verify.hpp"

#include "epos/error.hpp"

namespace epos {

Condition parse_condition(const std::string& s) {
  if (s == "co-triangle-free") return Condition::co_triangle_free;
  if (s == "alpha") return Condition::alpha;
  if (s == "clawfree-ccfree") return Condition::clawfree_ccfree;
  throw ValidationError("unknown condition \"" + s + "\" (expected co-triangle-free, alpha or clawfree-ccfree)");
}

std::string to_string(Condition c) {
  switch (c) {
    case Condition::co_triangle_free:
      return "co-triangle-free";
    case Condition::alpha:
      return "alpha";
    case Condition::clawfree_ccfree:
      return "clawfree-ccfree";
  }
  return {};
}

bool hypothesis_holds(Condition c, const Graph& g) {
  switch (c) {
    case Condition::co_triangle_free:
      return is_co_triangle_free(g);
    case Condition::alpha:
      return alpha_condition_holds(g);
    case Condition::clawfree_ccfree:
      return count_claws(g) == 0 && (g.order() < 4 || !is_claw_contractible(g));
  }
  return false;
}

std::string check_condition(Condition c, const Graph& g, bool e_positive, WitnessFamily family) {
  if (!hypothesis_holds(c, g)) return {};
  if (c == Condition::alpha) {
    if (e_positive) return "labeled e-positive";
    if (!large_alpha_certificate(g, family)) return "a witness-shape connected partition exists";
    return {};
  }
  return e_positive ? std::string() : "labeled not e-positive";
}

}  // namespace epos
