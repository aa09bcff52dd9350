#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dsub/theorems.hpp"

namespace dsub {

/// Rule selectors understood by run_random_suite and the CLI.
inline constexpr std::string_view kRuleNames[] = {"sum", "product", "quotient", "max",
                                                   "min", "fixpoint", "taylor", "chain1d"};

bool is_rule_name(std::string_view rule);

/// Seeded randomised verification: `count` instances (arity 2, depth <= 4,
/// grid circle(resolution)), each checked against `rule` or against every
/// rule when rule == "all". Quotient reports are skipped when f2(x) is
/// (numerically) zero; instances with undefined operands are redrawn.
std::vector<VerificationReport> run_random_suite(std::string_view rule, std::size_t count,
                                                 std::uint64_t seed, std::size_t resolution,
                                                 const VerifyOptions& opt = {});

}  // namespace dsub
