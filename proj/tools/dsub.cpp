// dsub command-line front end. Talks to the library only through dsub.h.
#include <dsub/dsub.h>

#include <CLI11.hpp>

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

enum Exit : int { kOk = 0, kVerifyFailed = 1, kInputError = 2, kNoWitness = 3 };

struct CliError {
  dsub_status status;
  std::string message;
};

void check(dsub_status s, const std::string& context) {
  if (s == DSUB_OK) return;
  std::string msg = context + ": " + dsub_status_name(s);
  const std::string detail = dsub_last_error();
  if (!detail.empty()) msg += ": " + detail;
  if (const long pos = dsub_last_error_position(); pos >= 0 && detail.find("position") == std::string::npos) msg += " (at position " + std::to_string(pos) + ")";
  throw CliError{s, msg};
}

[[noreturn]] void input_error(const std::string& msg) { throw CliError{DSUB_ERR_INVALID_ARGUMENT, msg}; }

struct ExprDel { void operator()(dsub_expr* p) const { dsub_expr_free(p); } };
struct GridDel { void operator()(dsub_grid* p) const { dsub_grid_free(p); } };
struct SetDel { void operator()(dsub_dirset* p) const { dsub_dirset_free(p); } };
using ExprPtr = std::unique_ptr<dsub_expr, ExprDel>;
using GridPtr = std::unique_ptr<dsub_grid, GridDel>;
using SetPtr = std::unique_ptr<dsub_dirset, SetDel>;

std::string take(char* s) {
  std::string out = s ? s : "";
  dsub_string_free(s);
  return out;
}

std::vector<double> parse_point(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end == item.c_str() || *end != '\0' || errno == ERANGE)
      input_error(std::string("invalid ") + what + " '" + text + "'");
    out.push_back(v);
  }
  if (out.empty()) input_error(std::string("empty ") + what);
  return out;
}

struct Common {
  std::string function;
  std::string point;
  std::size_t resolution = 0;
  double eps_order = 1e-9;
  double eps_active = 1e-9;
  double rule_tol = 1e-9;
  std::string json_path, csv_path, svg_path;

  dsub_options options() const {
    dsub_options o;
    dsub_options_default(&o);
    o.eps_order = eps_order;
    o.eps_active = eps_active;
    o.rule_tol_scale = rule_tol;
    return o;
  }
};

std::size_t default_resolution(std::size_t dim) {
  if (const char* env = std::getenv("DSUB_RESOLUTION"); env && *env) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (*end != '\0' || v < 8) input_error("DSUB_RESOLUTION must be an integer >= 8");
    return v;
  }
  return dim >= 3 ? 64 : 360;
}

void add_common(CLI::App* app, Common& c, bool with_function = true) {
  if (with_function) app->add_option("-f,--function", c.function, "function expression in x1..xn");
  app->add_option("-M,--resolution", c.resolution, "grid resolution (directions per circle)")
      ->check(CLI::Range(std::size_t{8}, std::size_t{1} << 20));
  app->add_option("--eps-order", c.eps_order, "partial-order slack")->check(CLI::PositiveNumber);
  app->add_option("--eps-active", c.eps_active, "active-set tolerance factor")->check(CLI::PositiveNumber);
  app->add_option("--rule-tol", c.rule_tol, "calculus-rule tolerance scale")->check(CLI::PositiveNumber);
  app->add_option("--json", c.json_path, "write JSON to this path");
}

GridPtr make_grid(std::size_t dim, std::size_t resolution) {
  if (dim < 2) return nullptr;
  dsub_grid* g = nullptr;
  check(dsub_grid_create(dim, resolution ? resolution : default_resolution(dim), &g), "grid");
  return GridPtr(g);
}

ExprPtr parse_expr(const std::string& text, std::size_t arity, const char* what) {
  if (text.empty()) input_error(std::string("missing ") + what);
  dsub_expr* e = nullptr;
  check(dsub_expr_parse(text.c_str(), arity, &e), std::string("parsing ") + what);
  return ExprPtr(e);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) input_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) input_error("write to '" + path + "' failed");
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string fmt_point(const std::vector<double>& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ", " : "") + fmt(p[i]);
  return s + ")";
}

// Writes the 2-D visualisation files. Returns the number of inverted segments.
std::size_t write_viz(const dsub_dirset* d, const Common& c) {
  if (dsub_dirset_dim(d) != 2) {
    if (!c.csv_path.empty() || !c.svg_path.empty()) input_error("visualisation needs a 2-D set");
    return 0;
  }
  if (!c.csv_path.empty()) {
    char* csv = nullptr;
    check(dsub_dirset_segments_csv(d, &csv), "segments");
    write_file(c.csv_path, take(csv));
  }
  if (!c.svg_path.empty()) {
    char* svg = nullptr;
    check(dsub_dirset_segments_svg(d, &svg), "segments");
    write_file(c.svg_path, take(svg));
  }
  std::size_t inverted = 0;
  check(dsub_dirset_inverted_count(d, &inverted), "segments");
  return inverted;
}

int cmd_subdiff(const Common& c) {
  const auto x = parse_point(c.point, "point");
  const auto f = parse_expr(c.function, x.size(), "function");
  const auto grid = make_grid(x.size(), c.resolution);
  const dsub_options opt = c.options();
  dsub_dirset* raw = nullptr;
  check(dsub_subdiff(f.get(), x.data(), x.size(), grid.get(), &opt, &raw), "subdiff");
  const SetPtr d(raw);

  char* json = nullptr;
  check(dsub_dirset_to_json(d.get(), &json), "serialise");
  const std::string text = take(json);
  const bool json_to_stdout = c.json_path.empty();
  if (!json_to_stdout) write_file(c.json_path, text + "\n");
  std::ostream& info = json_to_stdout ? std::cerr : std::cout;

  double lo = 0, hi = 0;
  check(dsub_dirset_support_range(d.get(), &lo, &hi), "support range");
  info << "norm: " << fmt(dsub_dirset_norm(d.get())) << "\n";
  info << "support-min: " << fmt(lo) << "\n";
  info << "support-max: " << fmt(hi) << "\n";
  const std::size_t inverted = write_viz(d.get(), c);
  if (x.size() == 2) info << "inverted-segments: " << inverted << "\n";
  if (json_to_stdout) std::cout << text << "\n";
  return kOk;
}

struct VerifyArgs {
  std::string rule;
  std::string f1, f2;
  std::vector<std::string> extra;
  std::vector<std::string> inner;
  double alpha = 1.0, beta = 1.0;
  std::size_t random = 0;
  unsigned long long seed = 1;
};

int cmd_verify(const Common& c, const VerifyArgs& v) {
  const dsub_options opt = c.options();
  char* json = nullptr;
  int all_pass = 0;
  std::size_t count = 0;
  if (v.random > 0) {
    check(dsub_verify_random(v.rule.c_str(), v.random, v.seed, c.resolution ? c.resolution : 180, &opt, &json,
                             &all_pass, &count),
          "verify");
  } else {
    if (v.rule == "all") input_error("--rule all needs --random N");
    const auto x = parse_point(c.point, "point");
    std::vector<const char*> extra, inner;
    for (const auto& s : v.extra) extra.push_back(s.c_str());
    for (const auto& s : v.inner) inner.push_back(s.c_str());
    // A lone denominator means the quotient 1 / f2.
    const std::string f1 = (v.rule == "quotient" && v.f1.empty() && !v.f2.empty()) ? "1" : v.f1;
    dsub_verify_request req{};
    req.rule = v.rule.c_str();
    req.f = c.function.empty() ? nullptr : c.function.c_str();
    req.f1 = f1.empty() ? nullptr : f1.c_str();
    req.f2 = v.f2.empty() ? nullptr : v.f2.c_str();
    req.functions = extra.data();
    req.function_count = extra.size();
    req.inner = inner.data();
    req.inner_count = inner.size();
    req.alpha = v.alpha;
    req.beta = v.beta;
    req.point = x.data();
    req.n = x.size();
    req.resolution = c.resolution ? c.resolution : default_resolution(x.size());
    check(dsub_verify(&req, &opt, &json, &all_pass), "verify");
    count = 1;
  }
  const std::string text = take(json);
  const bool json_to_stdout = c.json_path.empty();
  if (!json_to_stdout) write_file(c.json_path, text + "\n");
  std::ostream& info = json_to_stdout ? std::cerr : std::cout;
  info << "reports: " << count << "\n";
  info << "result: " << (all_pass ? "pass" : "FAIL") << "\n";
  if (json_to_stdout) std::cout << text << "\n";
  return all_pass ? kOk : kVerifyFailed;
}

int cmd_optcheck(const Common& c) {
  const auto x = parse_point(c.point, "point");
  const auto f = parse_expr(c.function, x.size(), "function");
  const auto grid = make_grid(x.size(), c.resolution);
  const dsub_options opt = c.options();
  int is_min = 0, is_max = 0;
  check(dsub_optcheck(f.get(), x.data(), x.size(), grid.get(), &opt, &is_min, &is_max), "optcheck");
  std::cout << "min-candidate: " << (is_min ? "yes" : "no") << "\n";
  std::cout << "max-candidate: " << (is_max ? "yes" : "no") << "\n";
  return kOk;
}

struct MvtArgs {
  std::string x0, x1;
  std::size_t scan = 1000;
  double eps = 1e-9;
};

int cmd_mvt(const Common& c, const MvtArgs& m) {
  const auto x0 = parse_point(m.x0, "x0");
  const auto x1 = parse_point(m.x1, "x1");
  if (x0.size() != x1.size()) input_error("x0 and x1 differ in length");
  const auto g = parse_expr(c.function, x0.size(), "function");
  const dsub_options opt = c.options();
  dsub_mvt_result r{};
  std::vector<double> x_hat(x0.size());
  const dsub_status s = dsub_mvt(g.get(), x0.data(), x1.data(), x0.size(), m.scan, m.eps, &opt, &r, x_hat.data());
  check(s, "mvt");
  std::cout << "t-hat: " << fmt(r.t_hat) << "\n";
  std::cout << "x-hat: " << fmt_point(x_hat) << "\n";
  std::cout << "residual: " << fmt(r.residual) << "\n";
  std::cout << "interval: (" << fmt(r.a_neg) << ", " << fmt(r.a_pos) << ")\n";
  std::cout << "found-by: " << (r.from_scan ? "scan" : "bisection") << "\n";
  return kOk;
}

int cmd_viz(const Common& c, const std::string& input) {
  SetPtr d;
  if (!input.empty()) {
    std::ifstream in(input, std::ios::binary);
    if (!in) input_error("cannot read '" + input + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    dsub_dirset* raw = nullptr;
    check(dsub_dirset_from_json(buf.str().c_str(), &raw), "reading " + input);
    d.reset(raw);
  } else {
    const auto x = parse_point(c.point, "point");
    if (x.size() != 2) input_error("viz needs a 2-D point");
    const auto f = parse_expr(c.function, 2, "function");
    const auto grid = make_grid(2, c.resolution);
    const dsub_options opt = c.options();
    dsub_dirset* raw = nullptr;
    check(dsub_subdiff(f.get(), x.data(), 2, grid.get(), &opt, &raw), "subdiff");
    d.reset(raw);
  }
  if (c.csv_path.empty() && c.svg_path.empty()) {
    if (dsub_dirset_dim(d.get()) != 2) input_error("visualisation needs a 2-D set");
    char* csv = nullptr;
    check(dsub_dirset_segments_csv(d.get(), &csv), "segments");
    std::cout << take(csv);
    return kOk;
  }
  const std::size_t inverted = write_viz(d.get(), c);
  std::cout << "inverted-segments: " << inverted << "\n";
  return kOk;
}

// CLI11 has no multi-character short options, and values such as "-1,0"
// look like flags to it. Rewrite both into --name=value form.
std::vector<std::string> normalise_args(int argc, char** argv) {
  static const std::vector<std::pair<std::string, std::string>> valued = {
      {"-f1", "--f1"}, {"-f2", "--f2"}, {"-x", "--point"}, {"--point", "--point"}, {"--x0", "--x0"},
      {"--x1", "--x1"}, {"-a", "--alpha"}, {"--alpha", "--alpha"}, {"-b", "--beta"}, {"--beta", "--beta"},
      {"--f1", "--f1"}, {"--f2", "--f2"}};
  std::vector<std::string> out{argv[0]};
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    bool done = false;
    for (const auto& [from, to] : valued) {
      if (a == from && i + 1 < argc) {
        out.push_back(to + "=" + argv[++i]);
        done = true;
        break;
      }
    }
    if (!done) out.push_back(a);
  }
  return out;
}

int exit_code(dsub_status s) {
  return s == DSUB_ERR_WITNESS_NOT_FOUND ? kNoWitness : kInputError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Directed subdifferentials of nonsmooth expressions"};
  app.require_subcommand(1);

  Common c;
  VerifyArgs v;
  MvtArgs m;
  std::string input;

  auto* subdiff = app.add_subcommand("subdiff", "compute and export a directed subdifferential");
  add_common(subdiff, c);
  subdiff->add_option("-x,--point", c.point, "comma-separated point")->required();
  subdiff->add_option("--csv", c.csv_path, "segment CSV (n = 2)");
  subdiff->add_option("--svg", c.svg_path, "segment SVG (n = 2)");

  auto* verify = app.add_subcommand("verify", "verify a calculus rule");
  add_common(verify, c);
  verify->add_option("--rule", v.rule, "sum|product|quotient|max|min|fixpoint|taylor|chain1d|all")
      ->required()
      ->check(CLI::IsMember({"sum", "product", "quotient", "max", "min", "fixpoint", "taylor", "chain1d", "all"}));
  verify->add_option("-x,--point", c.point, "comma-separated point");
  verify->add_option("--f1", v.f1, "first operand");
  verify->add_option("--f2", v.f2, "second operand");
  verify->add_option("--also", v.extra, "further operands for max/min");
  verify->add_option("--inner", v.inner, "inner smooth map (taylor, chain1d); repeat per component");
  verify->add_option("-a,--alpha", v.alpha, "sum-rule coefficient of f1");
  verify->add_option("-b,--beta", v.beta, "sum-rule coefficient of f2");
  verify->add_option("--random", v.random, "run N seeded random instances");
  verify->add_option("--seed", v.seed, "seed for --random");

  auto* optcheck = app.add_subcommand("optcheck", "necessary optimality conditions");
  add_common(optcheck, c);
  optcheck->add_option("-x,--point", c.point, "comma-separated point")->required();

  auto* mvt = app.add_subcommand("mvt", "mean-value witness on a segment");
  add_common(mvt, c);
  mvt->add_option("--x0", m.x0, "segment start")->required();
  mvt->add_option("--x1", m.x1, "segment end")->required();
  mvt->add_option("--scan", m.scan, "interior scan points")->check(CLI::PositiveNumber);
  mvt->add_option("--eps", m.eps, "acceptance slack")->check(CLI::NonNegativeNumber);

  auto* viz = app.add_subcommand("viz", "2-D segment export");
  add_common(viz, c);
  viz->add_option("-x,--point", c.point, "comma-separated point");
  viz->add_option("--input", input, "directed set JSON instead of -f/-x");
  viz->add_option("--csv", c.csv_path, "segment CSV");
  viz->add_option("--svg", c.svg_path, "segment SVG");

  auto args = normalise_args(argc, argv);
  std::vector<char*> cargs;
  for (auto& a : args) cargs.push_back(a.data());
  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (*subdiff) return cmd_subdiff(c);
    if (*verify) return cmd_verify(c, v);
    if (*optcheck) return cmd_optcheck(c);
    if (*mvt) return cmd_mvt(c, m);
    if (*viz) return cmd_viz(c, input);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return exit_code(e.status);
  }
  return kInputError;
}
