#include "dsub/suite.hpp"

#include <algorithm>
#include <cmath>

#include "dsub/corpus.hpp"
#include "dsub/error.hpp"

namespace dsub {
namespace {

struct Instance {
  Expr f1, f2, outer;
  std::vector<Expr> inner2;  // smooth maps R^2 -> R
  std::vector<Expr> inner1;  // smooth maps R -> R
  Vec x;
  double alpha = 1.0, beta = 1.0, t0 = 0.0;
};

Instance draw(corpus::Rng& rng) {
  const Vec x = corpus::random_point(rng, 2);
  const corpus::ExprShape shape{2, 4, true, false, x};
  const corpus::ExprShape outer_shape{2, 3, false, false, x};
  Instance in{corpus::random_expr(rng, shape), corpus::random_expr(rng, shape),
              corpus::random_expr(rng, outer_shape), {}, {}, x};
  // Half of the pairs tie at x so that the max and min rules see both operands active.
  if (std::bernoulli_distribution(0.5)(rng))
    in.f2 = Expr::lin_comb(1.0, in.f2, eval(in.f1, x) - eval(in.f2, x), Expr::constant(1.0, 2));
  in.alpha = corpus::uniform(rng, -2, 2);
  in.beta = corpus::uniform(rng, -2, 2);
  in.t0 = corpus::uniform(rng, -1, 1);
  for (int i = 0; i < 2; ++i) {
    in.inner2.push_back(corpus::random_smooth_1d(rng, 2, 2));
    in.inner1.push_back(corpus::random_smooth_1d(rng, 1, 2));
  }
  // Probe every operand once so that undefined instances are redrawn.
  eval(in.f1, in.x);
  if (std::abs(eval(in.f2, in.x)) <= 1e-8)
    throw Error(Errc::division_by_zero, "f2 vanishes at the drawn point");
  dirderiv_transform(in.f1, in.x);
  dirderiv_transform(in.f2, in.x);
  return in;
}

void check(std::string_view rule, const Instance& in, const GridPtr& grid, const VerifyOptions& opt,
           std::vector<VerificationReport>& out) {
  const bool all = rule == "all";
  const std::vector<Expr> pair{in.f1, in.f2};
  if (all || rule == "sum") out.push_back(verify_sum_rule(in.f1, in.f2, in.alpha, in.beta, in.x, grid, opt));
  if (all || rule == "product") out.push_back(verify_product_rule(in.f1, in.f2, in.x, grid, opt));
  if (all || rule == "quotient") out.push_back(verify_quotient_rule(in.f1, in.f2, in.x, grid, opt));
  if (all || rule == "max") out.push_back(verify_max_rule(pair, in.x, grid, opt));
  if (all || rule == "min") out.push_back(verify_min_rule(pair, in.x, grid, opt));
  if (all || rule == "fixpoint") out.push_back(verify_dirderiv_fixpoint(in.f1, in.x, grid, opt));
  if (all || rule == "taylor") out.push_back(verify_taylor_invariance(in.outer, in.inner2, in.x, grid, opt));
  if (all || rule == "chain1d") out.push_back(verify_chain_rule_1d(in.outer, in.inner1, in.t0, opt));
}

}  // namespace

bool is_rule_name(std::string_view rule) {
  return std::find(std::begin(kRuleNames), std::end(kRuleNames), rule) != std::end(kRuleNames);
}

std::vector<VerificationReport> run_random_suite(std::string_view rule, std::size_t count,
                                                 std::uint64_t seed, std::size_t resolution,
                                                 const VerifyOptions& opt) {
  if (rule != "all" && !is_rule_name(rule))
    throw Error(Errc::invalid_argument, "unknown rule '" + std::string(rule) + "'");
  const GridPtr grid = SphereGrid::for_dimension(2, resolution);
  corpus::Rng rng(seed);
  std::vector<VerificationReport> out;
  for (std::size_t i = 0; i < count; ++i) {
    for (int attempt = 0;; ++attempt) {
      try {
        const Instance in = draw(rng);
        std::vector<VerificationReport> reports;
        check(rule, in, grid, opt, reports);
        out.insert(out.end(), std::make_move_iterator(reports.begin()),
                   std::make_move_iterator(reports.end()));
        break;
      } catch (const Error& e) {
        if ((e.code() != Errc::domain && e.code() != Errc::division_by_zero) || attempt > 100) throw;
      }
    }
  }
  return out;
}

}  // namespace dsub
