#include "dsub/expr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "dsub/error.hpp"

namespace dsub {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::parse: return "parse error";
    case Errc::unknown_identifier: return "unknown identifier";
    case Errc::arity_mismatch: return "arity mismatch";
    case Errc::domain: return "domain violation";
    case Errc::division_by_zero: return "division by zero";
    case Errc::dimension_mismatch: return "dimension mismatch";
    case Errc::grid_mismatch: return "grid mismatch";
    case Errc::invalid_argument: return "invalid argument";
    case Errc::kink: return "kink at base point";
    case Errc::witness_not_found: return "witness not found";
  }
  return "unknown error";
}

namespace {

void require_same_arity(const Expr& a, const Expr& b) {
  if (a.arity() != b.arity())
    throw Error(Errc::arity_mismatch, "operands with different arity");
}

bool kink_free(const Expr& e) {
  const auto& n = e.node();
  if (n.kind == NodeKind::max || n.kind == NodeKind::min) return false;
  return std::all_of(n.children.begin(), n.children.end(), kink_free);
}

double active_band(double extreme, double eps_active) {
  return eps_active * (1.0 + std::abs(extreme));
}

double apply_smooth(const ExprNode& n, double v) {
  switch (n.fn) {
    case Smooth::sin: return std::sin(v);
    case Smooth::cos: return std::cos(v);
    case Smooth::exp: return std::exp(v);
    case Smooth::log:
      if (!(v > 0.0)) throw Error(Errc::domain, "log of a non-positive value");
      return std::log(v);
    case Smooth::sqr: return v * v;
    case Smooth::sqrt:
      if (!(v >= 0.0)) throw Error(Errc::domain, "sqrt of a negative value");
      return std::sqrt(v);
    case Smooth::pow: return std::pow(v, n.exponent);
  }
  return 0.0;
}

double smooth_derivative(const ExprNode& n, double v) {
  switch (n.fn) {
    case Smooth::sin: return std::cos(v);
    case Smooth::cos: return -std::sin(v);
    case Smooth::exp: return std::exp(v);
    case Smooth::log:
      if (!(v > 0.0)) throw Error(Errc::domain, "log of a non-positive value");
      return 1.0 / v;
    case Smooth::sqr: return 2.0 * v;
    case Smooth::sqrt:
      if (!(v > 0.0)) throw Error(Errc::domain, "sqrt is not differentiable at non-positive values");
      return 0.5 / std::sqrt(v);
    case Smooth::pow:
      return n.exponent == 0 ? 0.0 : n.exponent * std::pow(v, n.exponent - 1);
  }
  return 0.0;
}

Vec apply_affine(const ExprNode& n, std::span<const double> x) {
  const std::size_t rows = n.offset.size();
  Vec y(n.offset);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < n.arity; ++j) y[i] += n.matrix[i * n.arity + j] * x[j];
  return y;
}

std::vector<double> child_values(const ExprNode& n, std::span<const double> x) {
  std::vector<double> v;
  v.reserve(n.children.size());
  for (const auto& c : n.children) v.push_back(eval(c, x));
  return v;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

}  // namespace

std::size_t Expr::arity() const noexcept { return node_->arity; }
NodeKind Expr::kind() const noexcept { return node_->kind; }

std::size_t Expr::size() const {
  std::size_t s = 1;
  for (const auto& c : node_->children) s += c.size();
  return s;
}

Expr Expr::var(std::size_t index, std::size_t arity) {
  if (index >= arity) throw Error(Errc::arity_mismatch, "variable index exceeds arity");
  ExprNode n;
  n.kind = NodeKind::var;
  n.arity = arity;
  n.index = index;
  return Expr(std::make_shared<const ExprNode>(std::move(n)));
}

Expr Expr::constant(double value, std::size_t arity) {
  if (!std::isfinite(value)) throw Error(Errc::invalid_argument, "non-finite constant");
  ExprNode n;
  n.kind = NodeKind::constant;
  n.arity = arity;
  n.value = value;
  return Expr(std::make_shared<const ExprNode>(std::move(n)));
}

Expr Expr::unary(Smooth fn, Expr child) {
  if (fn == Smooth::pow) throw Error(Errc::invalid_argument, "use Expr::pow for powers");
  ExprNode n;
  n.kind = NodeKind::smooth_unary;
  n.arity = child.arity();
  n.fn = fn;
  n.children.push_back(std::move(child));
  return Expr(std::make_shared<const ExprNode>(std::move(n)));
}

Expr Expr::pow(Expr child, int exponent) {
  if (exponent < 0) throw Error(Errc::invalid_argument, "pow needs a non-negative integer exponent");
  ExprNode n;
  n.kind = NodeKind::smooth_unary;
  n.arity = child.arity();
  n.fn = Smooth::pow;
  n.exponent = exponent;
  n.children.push_back(std::move(child));
  return Expr(std::make_shared<const ExprNode>(std::move(n)));
}

Expr Expr::lin_comb(double alpha, Expr left, double beta, Expr right) {
  require_same_arity(left, right);
  if (!std::isfinite(alpha) || !std::isfinite(beta))
    throw Error(Errc::invalid_argument, "non-finite linear-combination weight");
  ExprNode n;
  n.kind = NodeKind::lin_comb;
  n.arity = left.arity();
  n.alpha = alpha;
  n.beta = beta;
  n.children = {std::move(left), std::move(right)};
  return Expr(std::make_shared<const ExprNode>(std::move(n)));
}

Expr Expr::product(Expr left, Expr right) {
  require_same_arity(left, right);
  ExprNode n;
  n.kind = NodeKind::product;
  n.arity = left.arity();
  n.children = {std::move(left), std::move(right)};
  return Expr(std::make_shared<const ExprNode>(std::move(n)));
}

Expr Expr::quotient(Expr num, Expr den) {
  require_same_arity(num, den);
  ExprNode n;
  n.kind = NodeKind::quotient;
  n.arity = num.arity();
  n.children = {std::move(num), std::move(den)};
  return Expr(std::make_shared<const ExprNode>(std::move(n)));
}

Expr extremum_node(NodeKind kind, std::vector<Expr> children) {
  if (children.empty()) throw Error(Errc::invalid_argument, "max/min without operands");
  if (children.size() == 1) return children.front();
  for (const auto& c : children) require_same_arity(children.front(), c);
  ExprNode n;
  n.kind = kind;
  n.arity = children.front().arity();
  n.children = std::move(children);
  return Expr::make_node(std::move(n));
}

Expr Expr::max(std::vector<Expr> children) {
  return extremum_node(NodeKind::max, std::move(children));
}

Expr Expr::min(std::vector<Expr> children) {
  return extremum_node(NodeKind::min, std::move(children));
}

Expr Expr::abs(Expr child) {
  Expr neg = -child;
  return max({std::move(child), std::move(neg)});
}

Expr Expr::affine(std::vector<double> matrix, Vec offset, std::size_t arity,
                  Expr child) {
  if (offset.size() != child.arity() || matrix.size() != child.arity() * arity)
    throw Error(Errc::dimension_mismatch, "affine map does not fit its operand");
  for (double v : matrix)
    if (!std::isfinite(v)) throw Error(Errc::invalid_argument, "non-finite affine coefficient");
  for (double v : offset)
    if (!std::isfinite(v)) throw Error(Errc::invalid_argument, "non-finite affine offset");
  ExprNode n;
  n.kind = NodeKind::affine;
  n.arity = arity;
  n.matrix = std::move(matrix);
  n.offset = std::move(offset);
  n.children.push_back(std::move(child));
  return make_node(std::move(n));
}

Expr Expr::compose(Expr outer, std::vector<Expr> inner) {
  if (inner.size() != outer.arity())
    throw Error(Errc::arity_mismatch, "compose: inner map count differs from outer arity");
  if (inner.empty()) throw Error(Errc::invalid_argument, "compose: no inner maps");
  for (const auto& c : inner) {
    require_same_arity(inner.front(), c);
    if (!kink_free(c))
      throw Error(Errc::invalid_argument, "compose: inner maps must be smooth (no max/min)");
  }
  ExprNode n;
  n.kind = NodeKind::smooth_compose;
  n.arity = inner.front().arity();
  n.children.reserve(inner.size() + 1);
  n.children.push_back(std::move(outer));
  for (auto& c : inner) n.children.push_back(std::move(c));
  return make_node(std::move(n));
}

Expr Expr::make_node(ExprNode n) {
  return Expr(std::make_shared<const ExprNode>(std::move(n)));
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::lin_comb(1.0, a, 1.0, b); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::lin_comb(1.0, a, -1.0, b); }
Expr operator-(const Expr& a) {
  return Expr::lin_comb(-1.0, a, 0.0, Expr::constant(0.0, a.arity()));
}
Expr operator*(const Expr& a, const Expr& b) { return Expr::product(a, b); }
Expr operator*(double s, const Expr& a) {
  return Expr::lin_comb(s, a, 0.0, Expr::constant(0.0, a.arity()));
}
Expr operator/(const Expr& a, const Expr& b) { return Expr::quotient(a, b); }

double eval(const Expr& e, std::span<const double> x) {
  const auto& n = e.node();
  if (x.size() != n.arity) throw Error(Errc::arity_mismatch, "eval: point length differs from arity");
  switch (n.kind) {
    case NodeKind::var: return x[n.index];
    case NodeKind::constant: return n.value;
    case NodeKind::smooth_unary: return apply_smooth(n, eval(n.children[0], x));
    case NodeKind::lin_comb:
      return n.alpha * eval(n.children[0], x) + n.beta * eval(n.children[1], x);
    case NodeKind::product: return eval(n.children[0], x) * eval(n.children[1], x);
    case NodeKind::quotient: {
      const double den = eval(n.children[1], x);
      if (den == 0.0) throw Error(Errc::division_by_zero, "quotient with zero denominator");
      return eval(n.children[0], x) / den;
    }
    case NodeKind::max: {
      const auto v = child_values(n, x);
      return *std::max_element(v.begin(), v.end());
    }
    case NodeKind::min: {
      const auto v = child_values(n, x);
      return *std::min_element(v.begin(), v.end());
    }
    case NodeKind::affine: return eval(n.children[0], apply_affine(n, x));
    case NodeKind::smooth_compose: {
      Vec y;
      y.reserve(n.children.size() - 1);
      for (std::size_t i = 1; i < n.children.size(); ++i) y.push_back(eval(n.children[i], x));
      return eval(n.children[0], y);
    }
  }
  return 0.0;
}

Expr dirderiv_transform(const Expr& e, std::span<const double> x, double eps_active) {
  const auto& n = e.node();
  if (x.size() != n.arity)
    throw Error(Errc::arity_mismatch, "dirderiv_transform: point length differs from arity");
  const std::size_t m = n.arity;
  switch (n.kind) {
    case NodeKind::var: return e;
    case NodeKind::constant: return Expr::constant(0.0, m);
    case NodeKind::smooth_unary: {
      const double inner = eval(n.children[0], x);
      return smooth_derivative(n, inner) * dirderiv_transform(n.children[0], x, eps_active);
    }
    case NodeKind::lin_comb:
      return Expr::lin_comb(n.alpha, dirderiv_transform(n.children[0], x, eps_active),
                            n.beta, dirderiv_transform(n.children[1], x, eps_active));
    case NodeKind::product: {
      const double f1 = eval(n.children[0], x);
      const double f2 = eval(n.children[1], x);
      return Expr::lin_comb(f1, dirderiv_transform(n.children[1], x, eps_active),
                            f2, dirderiv_transform(n.children[0], x, eps_active));
    }
    case NodeKind::quotient: {
      const double f1 = eval(n.children[0], x);
      const double f2 = eval(n.children[1], x);
      if (f2 == 0.0) throw Error(Errc::division_by_zero, "quotient with zero denominator");
      // (f2 D1 - f1 D2) / f2^2
      return Expr::lin_comb(1.0 / f2, dirderiv_transform(n.children[0], x, eps_active),
                            -f1 / (f2 * f2), dirderiv_transform(n.children[1], x, eps_active));
    }
    case NodeKind::max:
    case NodeKind::min: {
      const auto v = child_values(n, x);
      const double extreme = n.kind == NodeKind::max ? *std::max_element(v.begin(), v.end())
                                                     : *std::min_element(v.begin(), v.end());
      const double band = active_band(extreme, eps_active);
      std::vector<Expr> active;
      for (std::size_t i = 0; i < v.size(); ++i)
        if (std::abs(v[i] - extreme) <= band)
          active.push_back(dirderiv_transform(n.children[i], x, eps_active));
      return n.kind == NodeKind::max ? Expr::max(std::move(active)) : Expr::min(std::move(active));
    }
    case NodeKind::affine: {
      const Vec y = apply_affine(n, x);
      return Expr::affine(n.matrix, Vec(y.size(), 0.0), m,
                          dirderiv_transform(n.children[0], y, eps_active));
    }
    case NodeKind::smooth_compose: {
      Vec y;
      std::vector<Expr> inner;
      for (std::size_t i = 1; i < n.children.size(); ++i) {
        y.push_back(eval(n.children[i], x));
        inner.push_back(dirderiv_transform(n.children[i], x, eps_active));
      }
      return Expr::compose(dirderiv_transform(n.children[0], y, eps_active), std::move(inner));
    }
  }
  return e;
}

double dirderiv(const Expr& e, std::span<const double> x, std::span<const double> l,
                double eps_active) {
  if (l.size() != e.arity()) throw Error(Errc::arity_mismatch, "dirderiv: direction length differs from arity");
  for (double c : l)
    if (!std::isfinite(c)) throw Error(Errc::invalid_argument, "dirderiv: non-finite direction");
  return eval(dirderiv_transform(e, x, eps_active), l);
}

Expr restriction(const Expr& g, const Basis& basis) {
  const std::size_t n = g.arity();
  if (basis.dim() != n) throw Error(Errc::dimension_mismatch, "restriction: basis dimension differs from arity");
  const std::size_t k = basis.columns.size();
  std::vector<double> matrix(n * k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) matrix[i * k + j] = basis.columns[j][i];
  return Expr::affine(std::move(matrix), basis.direction, k, g);
}

bool has_active_kink(const Expr& e, std::span<const double> x, double eps_active) {
  const auto& n = e.node();
  switch (n.kind) {
    case NodeKind::var:
    case NodeKind::constant: return false;
    case NodeKind::max:
    case NodeKind::min: {
      const auto v = child_values(n, x);
      const double extreme = n.kind == NodeKind::max ? *std::max_element(v.begin(), v.end())
                                                     : *std::min_element(v.begin(), v.end());
      const double band = active_band(extreme, eps_active);
      std::size_t count = 0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (std::abs(v[i] - extreme) > band) continue;
        if (++count > 1 || has_active_kink(n.children[i], x, eps_active)) return true;
      }
      return false;
    }
    case NodeKind::affine: return has_active_kink(n.children[0], apply_affine(n, x), eps_active);
    case NodeKind::smooth_compose: {
      Vec y;
      for (std::size_t i = 1; i < n.children.size(); ++i) y.push_back(eval(n.children[i], x));
      return has_active_kink(n.children[0], y, eps_active);
    }
    default:
      return std::any_of(n.children.begin(), n.children.end(),
                         [&](const Expr& c) { return has_active_kink(c, x, eps_active); });
  }
}

std::string to_string(const Expr& e) {
  const auto& n = e.node();
  switch (n.kind) {
    case NodeKind::var: return "x" + std::to_string(n.index + 1);
    case NodeKind::constant: return n.value < 0 ? "(" + fmt(n.value) + ")" : fmt(n.value);
    case NodeKind::smooth_unary: {
      static constexpr const char* names[] = {"sin", "cos", "exp", "log", "sqr", "sqrt", "pow"};
      const std::string arg = to_string(n.children[0]);
      if (n.fn == Smooth::pow) return "pow(" + arg + ", " + std::to_string(n.exponent) + ")";
      return std::string(names[static_cast<int>(n.fn)]) + "(" + arg + ")";
    }
    case NodeKind::lin_comb:
      return "(" + fmt(n.alpha) + "*" + to_string(n.children[0]) + " + " + fmt(n.beta) + "*" +
             to_string(n.children[1]) + ")";
    case NodeKind::product:
      return "(" + to_string(n.children[0]) + " * " + to_string(n.children[1]) + ")";
    case NodeKind::quotient:
      return "(" + to_string(n.children[0]) + " / " + to_string(n.children[1]) + ")";
    case NodeKind::max:
    case NodeKind::min: {
      std::string s = n.kind == NodeKind::max ? "max(" : "min(";
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) s += ", ";
        s += to_string(n.children[i]);
      }
      return s + ")";
    }
    case NodeKind::affine: {
      std::ostringstream os;
      os << "affine[" << n.offset.size() << "x" << n.arity << "](" << to_string(n.children[0]) << ")";
      return os.str();
    }
    case NodeKind::smooth_compose: {
      std::string s = "compose(" + to_string(n.children[0]);
      for (std::size_t i = 1; i < n.children.size(); ++i) s += "; " + to_string(n.children[i]);
      return s + ")";
    }
  }
  return "?";
}

}  // namespace dsub
