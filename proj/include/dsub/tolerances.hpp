#pragma once

namespace dsub {

// Base factor for active-index grouping. Max/min nodes group children within
// kEpsActive * (1 + |f_max|); sup/inf of directed sets group supports within
// kEpsActive * max(1, |max support|).
inline constexpr double kEpsActive = 1e-9;

// Default slack for the partial order; ties within this trigger recursion.
inline constexpr double kEpsOrder = 1e-9;

// Calculus-rule reports pass when distance <= scale * (1 + |lhs| + |rhs|).
inline constexpr double kRuleTolScale = 1e-9;

inline constexpr double kFixpointTol = 1e-12;
inline constexpr double kChainTol = 1e-10;

}  // namespace dsub
