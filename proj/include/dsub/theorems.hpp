#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dsub/directed_set.hpp"
#include "dsub/expr.hpp"

namespace dsub {

struct VerifyOptions {
  double eps_active = kEpsActive;
  double rule_tol_scale = kRuleTolScale;
  /// Re-run with 10*eps_active and flag reports whose verdict flips.
  bool perturbation_guard = true;
};

/// Outcome of checking one identity lhs == rhs between directed sets.
struct VerificationReport {
  std::string rule;
  DirectedSet lhs;
  DirectedSet rhs;
  double distance = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  /// Set by the perturbation guard when the verdict depends on eps_active.
  bool borderline = false;
  Vec point;
  std::map<std::string, double> parameters;
};

VerificationReport verify_sum_rule(const Expr& f1, const Expr& f2, double alpha,
                                   double beta, std::span<const double> x,
                                   const GridPtr& grid,
                                   const VerifyOptions& opt = {});
VerificationReport verify_product_rule(const Expr& f1, const Expr& f2,
                                       std::span<const double> x,
                                       const GridPtr& grid,
                                       const VerifyOptions& opt = {});
/// Throws Errc::division_by_zero when f2(x) == 0.
VerificationReport verify_quotient_rule(const Expr& f1, const Expr& f2,
                                        std::span<const double> x,
                                        const GridPtr& grid,
                                        const VerifyOptions& opt = {});
VerificationReport verify_max_rule(std::span<const Expr> fs,
                                   std::span<const double> x,
                                   const GridPtr& grid,
                                   const VerifyOptions& opt = {});
VerificationReport verify_min_rule(std::span<const Expr> fs,
                                   std::span<const double> x,
                                   const GridPtr& grid,
                                   const VerifyOptions& opt = {});
/// d[f'(x; .)](0) == d f(x).
VerificationReport verify_dirderiv_fixpoint(const Expr& f,
                                            std::span<const double> x,
                                            const GridPtr& grid,
                                            const VerifyOptions& opt = {});

/// 0 <= d f(x).
bool check_min_condition(const Expr& f, std::span<const double> x,
                         const GridPtr& grid, double eps = kEpsOrder,
                         double eps_active = kEpsActive);
/// 0 <= -d f(x).
bool check_max_condition(const Expr& f, std::span<const double> x,
                         const GridPtr& grid, double eps = kEpsOrder,
                         double eps_active = kEpsActive);

/// [-g'(phi(t0); -phi'(t0)), g'(phi(t0); phi'(t0))] for smooth phi: R -> R^m.
DirectedInterval chain_rule_1d(const Expr& g, std::span<const Expr> phi,
                               double t0, double eps_active = kEpsActive);

/// Report form of the chain rule: lhs = d(g o phi)(t0), rhs = chain_rule_1d.
VerificationReport verify_chain_rule_1d(const Expr& g, std::span<const Expr> phi,
                                        double t0,
                                        const VerifyOptions& opt = {});

/// Directed subdifferential of t -> g(x0 + t (x1 - x0)) at t.
DirectedInterval segment_subdiff(const Expr& g, std::span<const double> x0,
                                 std::span<const double> x1, double t,
                                 double eps_active = kEpsActive);

/// lhs = d(g o phi)(x0), rhs = d(g o phi~)(x0) with phi~ the first-order
/// Taylor expansion of phi at x0.
VerificationReport verify_taylor_invariance(const Expr& g,
                                            std::span<const Expr> phi,
                                            std::span<const double> x0,
                                            const GridPtr& grid,
                                            const VerifyOptions& opt = {});

/// Jacobian of smooth maps at x, row-major (phi.size() x arity).
std::vector<double> jacobian(std::span<const Expr> phi,
                             std::span<const double> x,
                             double eps_active = kEpsActive);

struct MvtWitness {
  double t_hat = 0.0;
  double residual = 0.0;
  /// segment_subdiff at t_hat.
  DirectedInterval interval;
  Vec x_hat;
  /// found by the interior scan rather than by bisection
  bool from_scan = false;
};

/// Searches t in (0,1) with J_1({g(x1) - g(x0)}) <= d g(x0 + .(x1 - x0))(t).
/// Throws Errc::witness_not_found when neither the scan nor bisection on the
/// sign changes produces an accepted point.
MvtWitness mvt_witness(const Expr& g, std::span<const double> x0,
                       std::span<const double> x1, std::size_t scan_points,
                       double eps, double eps_active = kEpsActive);

}  // namespace dsub
