#include "dsub/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <utility>

#include "dsub/error.hpp"
#include "dsub/subdiff.hpp"

namespace dsub {
namespace {

using Sides = std::pair<DirectedSet, DirectedSet>;
using SideFn = std::function<Sides(double eps_active)>;
using TolFn = std::function<double(const Sides&)>;

TolFn scaled_tolerance(double scale) {
  return [scale](const Sides& s) { return scale * (1.0 + norm(s.first) + norm(s.second)); };
}

TolFn fixed_tolerance(double tol) {
  return [tol](const Sides&) { return tol; };
}

VerificationReport finish(std::string rule, const SideFn& sides, const TolFn& tol,
                          std::span<const double> x, const VerifyOptions& opt) {
  Sides s = sides(opt.eps_active);
  VerificationReport r;
  r.rule = std::move(rule);
  r.distance = norm(linear_combination(1.0, s.first, -1.0, s.second));
  r.tolerance = tol(s);
  r.pass = r.distance <= r.tolerance;
  r.point.assign(x.begin(), x.end());
  if (opt.perturbation_guard) {
    const Sides wide = sides(10.0 * opt.eps_active);
    const bool wide_pass =
        norm(linear_combination(1.0, wide.first, -1.0, wide.second)) <= tol(wide);
    r.borderline = wide_pass != r.pass;
  }
  r.lhs = std::move(s.first);
  r.rhs = std::move(s.second);
  return r;
}

std::vector<std::size_t> active_indices(std::span<const Expr> fs, std::span<const double> x,
                                        bool maximum, double eps_active) {
  std::vector<double> v;
  v.reserve(fs.size());
  for (const auto& f : fs) v.push_back(eval(f, x));
  const double extreme = maximum ? *std::max_element(v.begin(), v.end())
                                 : *std::min_element(v.begin(), v.end());
  const double band = eps_active * (1.0 + std::abs(extreme));
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (std::abs(v[i] - extreme) <= band) idx.push_back(i);
  return idx;
}

VerificationReport extremum_rule(std::span<const Expr> fs, std::span<const double> x,
                                 const GridPtr& grid, const VerifyOptions& opt, bool maximum) {
  if (fs.size() < 2) throw Error(Errc::invalid_argument, "max/min rule needs at least two functions");
  std::vector<Expr> owned(fs.begin(), fs.end());
  const Expr combined = maximum ? Expr::max(owned) : Expr::min(owned);
  auto sides = [&](double eps) {
    DirectedSet lhs = directed_subdiff(combined, x, grid, eps);
    std::vector<DirectedSet> parts;
    for (std::size_t i : active_indices(fs, x, maximum, eps))
      parts.push_back(directed_subdiff(fs[i], x, grid, eps));
    DirectedSet rhs = maximum ? sup(parts, eps) : inf(parts, eps);
    return Sides{std::move(lhs), std::move(rhs)};
  };
  auto r = finish(maximum ? "max" : "min", sides, scaled_tolerance(opt.rule_tol_scale), x, opt);
  r.parameters["functions"] = static_cast<double>(fs.size());
  r.parameters["active"] = static_cast<double>(active_indices(fs, x, maximum, opt.eps_active).size());
  return r;
}

Vec along(std::span<const double> x0, std::span<const double> x1, double t) {
  Vec x(x0.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = x0[i] + t * (x1[i] - x0[i]);
  return x;
}

}  // namespace

VerificationReport verify_sum_rule(const Expr& f1, const Expr& f2, double alpha, double beta,
                                   std::span<const double> x, const GridPtr& grid,
                                   const VerifyOptions& opt) {
  const Expr f = Expr::lin_comb(alpha, f1, beta, f2);
  auto sides = [&](double eps) {
    return Sides{directed_subdiff(f, x, grid, eps),
                 linear_combination(alpha, directed_subdiff(f1, x, grid, eps), beta,
                                    directed_subdiff(f2, x, grid, eps))};
  };
  auto r = finish("sum", sides, scaled_tolerance(opt.rule_tol_scale), x, opt);
  r.parameters["alpha"] = alpha;
  r.parameters["beta"] = beta;
  return r;
}

VerificationReport verify_product_rule(const Expr& f1, const Expr& f2, std::span<const double> x,
                                       const GridPtr& grid, const VerifyOptions& opt) {
  const double v1 = eval(f1, x);
  const double v2 = eval(f2, x);
  const Expr f = Expr::product(f1, f2);
  auto sides = [&](double eps) {
    return Sides{directed_subdiff(f, x, grid, eps),
                 linear_combination(v1, directed_subdiff(f2, x, grid, eps), v2,
                                    directed_subdiff(f1, x, grid, eps))};
  };
  auto r = finish("product", sides, scaled_tolerance(opt.rule_tol_scale), x, opt);
  r.parameters["f1"] = v1;
  r.parameters["f2"] = v2;
  return r;
}

VerificationReport verify_quotient_rule(const Expr& f1, const Expr& f2, std::span<const double> x,
                                        const GridPtr& grid, const VerifyOptions& opt) {
  const double v1 = eval(f1, x);
  const double v2 = eval(f2, x);
  if (v2 == 0.0) throw Error(Errc::division_by_zero, "quotient rule requires f2(x) != 0");
  const Expr f = Expr::quotient(f1, f2);
  auto sides = [&](double eps) {
    const DirectedSet inner = linear_combination(v1, directed_subdiff(f2, x, grid, eps), -v2,
                                                 directed_subdiff(f1, x, grid, eps));
    return Sides{directed_subdiff(f, x, grid, eps), (-1.0 / (v2 * v2)) * inner};
  };
  auto r = finish("quotient", sides, scaled_tolerance(opt.rule_tol_scale), x, opt);
  r.parameters["f1"] = v1;
  r.parameters["f2"] = v2;
  return r;
}

VerificationReport verify_max_rule(std::span<const Expr> fs, std::span<const double> x,
                                   const GridPtr& grid, const VerifyOptions& opt) {
  return extremum_rule(fs, x, grid, opt, true);
}

VerificationReport verify_min_rule(std::span<const Expr> fs, std::span<const double> x,
                                   const GridPtr& grid, const VerifyOptions& opt) {
  return extremum_rule(fs, x, grid, opt, false);
}

VerificationReport verify_dirderiv_fixpoint(const Expr& f, std::span<const double> x,
                                            const GridPtr& grid, const VerifyOptions& opt) {
  auto sides = [&](double eps) {
    const Vec origin(x.size(), 0.0);
    return Sides{directed_subdiff(dirderiv_transform(f, x, eps), origin, grid, eps),
                 directed_subdiff(f, x, grid, eps)};
  };
  return finish("fixpoint", sides, fixed_tolerance(kFixpointTol), x, opt);
}

bool check_min_condition(const Expr& f, std::span<const double> x, const GridPtr& grid,
                         double eps, double eps_active) {
  const DirectedSet d = directed_subdiff(f, x, grid, eps_active);
  return leq(directed_zero(d.dim(), d.grid()), d, eps);
}

bool check_max_condition(const Expr& f, std::span<const double> x, const GridPtr& grid,
                         double eps, double eps_active) {
  const DirectedSet d = directed_subdiff(f, x, grid, eps_active);
  const DirectedSet zero = directed_zero(d.dim(), d.grid());
  return leq(zero, linear_combination(-1.0, d, 0.0, zero), eps);
}

DirectedInterval chain_rule_1d(const Expr& g, std::span<const Expr> phi, double t0,
                               double eps_active) {
  if (phi.size() != g.arity()) throw Error(Errc::arity_mismatch, "chain rule: inner map count differs from outer arity");
  Vec y, dy;
  const double one = 1.0;
  for (const auto& p : phi) {
    if (p.arity() != 1) throw Error(Errc::arity_mismatch, "chain rule: inner maps must be univariate");
    if (has_active_kink(p, std::span(&t0, 1), eps_active))
      throw Error(Errc::kink, "chain rule: inner map is not differentiable at t0");
    y.push_back(eval(p, std::span(&t0, 1)));
    dy.push_back(dirderiv(p, std::span(&t0, 1), std::span(&one, 1), eps_active));
  }
  Vec neg(dy);
  for (auto& c : neg) c = -c;
  return {dirderiv(g, y, neg, eps_active), dirderiv(g, y, dy, eps_active)};
}

VerificationReport verify_chain_rule_1d(const Expr& g, std::span<const Expr> phi, double t0,
                                        const VerifyOptions& opt) {
  const Expr f = Expr::compose(g, std::vector<Expr>(phi.begin(), phi.end()));
  auto sides = [&](double eps) {
    return Sides{directed_subdiff(f, std::span(&t0, 1), nullptr, eps),
                 DirectedSet::leaf(chain_rule_1d(g, phi, t0, eps))};
  };
  auto r = finish("chain1d", sides, fixed_tolerance(kChainTol), std::span(&t0, 1), opt);
  r.parameters["t0"] = t0;
  return r;
}

DirectedInterval segment_subdiff(const Expr& g, std::span<const double> x0,
                                 std::span<const double> x1, double t, double eps_active) {
  if (x0.size() != g.arity() || x1.size() != g.arity())
    throw Error(Errc::arity_mismatch, "segment end points differ from function arity");
  if (!(t >= 0.0 && t <= 1.0)) throw Error(Errc::invalid_argument, "segment parameter outside [0, 1]");
  const Vec x = along(x0, x1, t);
  Vec d(x.size()), nd(x.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = x1[i] - x0[i];
    nd[i] = -d[i];
  }
  const Expr g_t = dirderiv_transform(g, x, eps_active);
  return {eval(g_t, nd), eval(g_t, d)};
}

std::vector<double> jacobian(std::span<const Expr> phi, std::span<const double> x,
                             double eps_active) {
  const std::size_t n = x.size();
  std::vector<double> jac(phi.size() * n);
  Vec unit(n, 0.0);
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (has_active_kink(phi[i], x, eps_active))
      throw Error(Errc::kink, "jacobian: inner map is not differentiable at the point");
    const Expr d = dirderiv_transform(phi[i], x, eps_active);
    for (std::size_t j = 0; j < n; ++j) {
      unit[j] = 1.0;
      jac[i * n + j] = eval(d, unit);
      unit[j] = 0.0;
    }
  }
  return jac;
}

VerificationReport verify_taylor_invariance(const Expr& g, std::span<const Expr> phi,
                                            std::span<const double> x0, const GridPtr& grid,
                                            const VerifyOptions& opt) {
  if (phi.size() != g.arity()) throw Error(Errc::arity_mismatch, "taylor: inner map count differs from outer arity");
  const std::size_t n = x0.size();
  const std::vector<double> jac = jacobian(phi, x0, opt.eps_active);
  Vec offset(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    double jx = 0.0;
    for (std::size_t j = 0; j < n; ++j) jx += jac[i * n + j] * x0[j];
    offset[i] = eval(phi[i], x0) - jx;
  }
  const Expr f = Expr::compose(g, std::vector<Expr>(phi.begin(), phi.end()));
  const Expr f_lin = Expr::affine(jac, offset, n, g);
  auto sides = [&](double eps) {
    return Sides{directed_subdiff(f, x0, grid, eps), directed_subdiff(f_lin, x0, grid, eps)};
  };
  return finish("taylor", sides, fixed_tolerance(kChainTol), x0, opt);
}

MvtWitness mvt_witness(const Expr& g, std::span<const double> x0, std::span<const double> x1,
                       std::size_t scan_points, double eps, double eps_active) {
  if (x0.size() != g.arity() || x1.size() != g.arity())
    throw Error(Errc::arity_mismatch, "segment end points differ from function arity");
  if (std::equal(x0.begin(), x0.end(), x1.begin()))
    throw Error(Errc::invalid_argument, "mean-value segment is degenerate (x0 == x1)");
  if (!(eps >= 0.0)) throw Error(Errc::invalid_argument, "witness tolerance must be non-negative");

  const double c = eval(g, x1) - eval(g, x0);
  struct Sample {
    double t, u, v;
    double residual() const { return std::max({0.0, -u, -v}); }
  };
  auto sample = [&](double t) {
    const DirectedInterval iv = segment_subdiff(g, x0, x1, t, eps_active);
    // iv = (g'(x(t); -d), g'(x(t); d))
    return Sample{t, iv.a_pos - c, iv.a_neg + c};
  };
  auto accept = [&](const Sample& s) {
    MvtWitness w;
    w.t_hat = s.t;
    w.residual = s.residual();
    w.interval = segment_subdiff(g, x0, x1, s.t, eps_active);
    w.x_hat = along(x0, x1, s.t);
    return w;
  };

  std::vector<Sample> samples;
  samples.reserve(scan_points + 2);
  samples.push_back(sample(0.0));
  for (std::size_t k = 1; k <= scan_points; ++k) {
    const Sample s = sample(static_cast<double>(k) / static_cast<double>(scan_points + 1));
    if (std::min(s.u, s.v) >= -eps) {
      MvtWitness w = accept(s);
      w.from_scan = true;
      return w;
    }
    samples.push_back(s);
  }
  samples.push_back(sample(1.0));

  auto bisect = [&](Sample a, Sample b, double Sample::*field) -> std::optional<Sample> {
    const bool neg_a = a.*field < 0.0;
    while (b.t - a.t > 1e-12) {
      const Sample m = sample(0.5 * (a.t + b.t));
      if ((m.*field < 0.0) == neg_a) a = m;
      else b = m;
    }
    std::optional<Sample> best;
    for (const Sample& s : {sample(0.5 * (a.t + b.t)), a, b}) {
      if (!(s.t > 0.0 && s.t < 1.0) || std::min(s.u, s.v) < -eps) continue;
      if (!best || s.residual() < best->residual()) best = s;
    }
    return best;
  };

  for (double Sample::*field : {&Sample::u, &Sample::v}) {
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
      if ((samples[i].*field < 0.0) == (samples[i + 1].*field < 0.0)) continue;
      if (auto s = bisect(samples[i], samples[i + 1], field)) return accept(*s);
    }
  }
  throw Error(Errc::witness_not_found,
              "no mean-value witness found; increase the number of scan points");
}

}  // namespace dsub
