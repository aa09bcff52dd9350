#include "dsub/serialize.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include "dsub/error.hpp"

namespace dsub {
namespace {

using nlohmann::json;

json grid_json(const SphereGrid& g) {
  json dirs = json::array();
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto d = g.direction(k);
    dirs.push_back(std::vector<double>(d.begin(), d.end()));
  }
  return {{"id", g.id()}, {"resolution", g.resolution()}, {"directions", std::move(dirs)}};
}

class Reader {
 public:
  DirectedSet read(const json& j) {
    const std::size_t dim = j.at("dim").get<std::size_t>();
    if (dim == 1) return DirectedSet::leaf({j.at("a_neg").get<double>(), j.at("a_pos").get<double>()});
    const json& entries = j.at("entries");
    std::vector<DirectedSet::Entry> out;
    out.reserve(entries.size());
    for (const json& e : entries) out.push_back({read(e.at("lower")), e.at("support").get<double>()});
    GridPtr sub = dim > 2 && !out.empty() ? out.front().lower.grid() : nullptr;
    return DirectedSet::node(grid(j.at("grid"), dim, std::move(sub)), std::move(out));
  }

 private:
  GridPtr grid(const json& j, std::size_t dim, GridPtr sub) {
    const std::string id = j.at("id").get<std::string>();
    if (auto it = cache_.find(id); it != cache_.end()) return it->second;
    auto g = SphereGrid::from_directions(dim, j.value("resolution", std::size_t{0}),
                                         j.at("directions").get<std::vector<Vec>>(), std::move(sub));
    if (g->id() != id)
      throw Error(Errc::grid_mismatch, "stored grid id " + id + " does not match its directions (" + g->id() + ")");
    cache_.emplace(id, g);
    return g;
  }

  std::map<std::string, GridPtr> cache_;
};

const char* kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::var: return "var";
    case NodeKind::constant: return "const";
    case NodeKind::smooth_unary: return "smooth";
    case NodeKind::affine: return "affine";
    case NodeKind::lin_comb: return "lincomb";
    case NodeKind::product: return "product";
    case NodeKind::quotient: return "quotient";
    case NodeKind::max: return "max";
    case NodeKind::min: return "min";
    case NodeKind::smooth_compose: return "compose";
  }
  return "?";
}

const char* smooth_name(Smooth s) {
  static constexpr const char* names[] = {"sin", "cos", "exp", "log", "sqr", "sqrt", "pow"};
  return names[static_cast<int>(s)];
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

json to_json(const DirectedSet& a) {
  if (a.is_leaf()) return {{"dim", 1}, {"a_neg", a.interval().a_neg}, {"a_pos", a.interval().a_pos}};
  json entries = json::array();
  for (const auto& e : a.entries()) entries.push_back({{"support", e.support}, {"lower", to_json(e.lower)}});
  return {{"dim", a.dim()}, {"grid", grid_json(*a.grid())}, {"entries", std::move(entries)}};
}

DirectedSet directed_set_from_json(const json& j) {
  try {
    return Reader().read(j);
  } catch (const json::exception& e) {
    throw Error(Errc::invalid_argument, std::string("malformed directed-set JSON: ") + e.what());
  }
}

json to_json(const Expr& e) {
  const auto& n = e.node();
  json j = {{"kind", kind_name(n.kind)}, {"arity", n.arity}};
  switch (n.kind) {
    case NodeKind::var: j["index"] = n.index; break;
    case NodeKind::constant: j["value"] = n.value; break;
    case NodeKind::smooth_unary:
      j["fn"] = smooth_name(n.fn);
      if (n.fn == Smooth::pow) j["exponent"] = n.exponent;
      break;
    case NodeKind::lin_comb:
      j["alpha"] = n.alpha;
      j["beta"] = n.beta;
      break;
    case NodeKind::affine:
      j["matrix"] = n.matrix;
      j["offset"] = n.offset;
      break;
    default: break;
  }
  if (!n.children.empty()) {
    json c = json::array();
    for (const auto& child : n.children) c.push_back(to_json(child));
    j["children"] = std::move(c);
  }
  return j;
}

json to_json(const VerificationReport& r) {
  json j = {{"rule", r.rule},           {"pass", r.pass},      {"distance", r.distance},
            {"tolerance", r.tolerance}, {"point", r.point},    {"borderline", r.borderline},
            {"lhs", to_json(r.lhs)},    {"rhs", to_json(r.rhs)}};
  if (!r.parameters.empty()) j["parameters"] = r.parameters;
  return j;
}

std::string segments_csv(const SegmentList& segments) {
  std::string out = "px,py,qx,qy,inverted\n";
  for (const auto& s : segments)
    out += num(s.p[0]) + "," + num(s.p[1]) + "," + num(s.q[0]) + "," + num(s.q[1]) + "," +
           (s.inverted ? "1" : "0") + "\n";
  return out;
}

std::string segments_svg(const SegmentList& segments) {
  double lo_x = std::numeric_limits<double>::infinity(), lo_y = lo_x;
  double hi_x = -lo_x, hi_y = -lo_x;
  for (const auto& s : segments)
    for (const auto& p : {s.p, s.q}) {
      lo_x = std::min(lo_x, p[0]);
      hi_x = std::max(hi_x, p[0]);
      lo_y = std::min(lo_y, p[1]);
      hi_y = std::max(hi_y, p[1]);
    }
  if (segments.empty()) lo_x = lo_y = -1.0, hi_x = hi_y = 1.0;
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-6});
  const double pad = 0.1 * span;
  const double size = 512.0;
  const double scale = size / (span + 2 * pad);
  auto px = [&](double x) { return (x - lo_x + pad) * scale; };
  auto py = [&](double y) { return (hi_y - y + pad) * scale; };  // svg y grows downward

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
     << "\" viewBox=\"0 0 " << size << " " << size << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // Faint axes through the origin when visible.
  if (lo_x - pad <= 0 && 0 <= hi_x + pad)
    os << "<line x1=\"" << px(0) << "\" y1=\"0\" x2=\"" << px(0) << "\" y2=\"" << size
       << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
  if (lo_y - pad <= 0 && 0 <= hi_y + pad)
    os << "<line x1=\"0\" y1=\"" << py(0) << "\" x2=\"" << size << "\" y2=\"" << py(0)
       << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
  const std::size_t n = std::max<std::size_t>(segments.size(), 1);
  for (std::size_t k = 0; k < segments.size(); ++k) {
    const auto& s = segments[k];
    const double hue = 360.0 * static_cast<double>(k) / static_cast<double>(n);
    const bool point = s.p == s.q;
    if (point) {
      os << "<circle cx=\"" << px(s.p[0]) << "\" cy=\"" << py(s.p[1]) << "\" r=\"1.5\" fill=\"hsl("
         << hue << ",80%,40%)\"/>\n";
      continue;
    }
    os << "<line x1=\"" << px(s.p[0]) << "\" y1=\"" << py(s.p[1]) << "\" x2=\"" << px(s.q[0])
       << "\" y2=\"" << py(s.q[1]) << "\" stroke=\"hsl(" << hue << ",80%,40%)\" stroke-width=\"1.5\"";
    if (s.inverted) os << " stroke-dasharray=\"4,3\" class=\"inverted\"";
    os << "/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace dsub
