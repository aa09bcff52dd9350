#include "dsub/dsub.h"

#include <cstring>
#include <string>
#include <vector>

#include "dsub/error.hpp"
#include "dsub/serialize.hpp"
#include "dsub/subdiff.hpp"
#include "dsub/suite.hpp"
#include "dsub/theorems.hpp"

struct dsub_expr {
  dsub::Expr value;
};
struct dsub_grid {
  dsub::GridPtr value;
};
struct dsub_dirset {
  dsub::DirectedSet value;
};

namespace {

thread_local std::string g_last_error;
thread_local long g_last_position = -1;

dsub_status status_of(dsub::Errc c) {
  using dsub::Errc;
  switch (c) {
    case Errc::parse: return DSUB_ERR_PARSE;
    case Errc::unknown_identifier: return DSUB_ERR_UNKNOWN_IDENTIFIER;
    case Errc::arity_mismatch: return DSUB_ERR_ARITY;
    case Errc::domain: return DSUB_ERR_DOMAIN;
    case Errc::division_by_zero: return DSUB_ERR_DIVISION_BY_ZERO;
    case Errc::dimension_mismatch: return DSUB_ERR_DIMENSION;
    case Errc::grid_mismatch: return DSUB_ERR_GRID;
    case Errc::invalid_argument: return DSUB_ERR_INVALID_ARGUMENT;
    case Errc::kink: return DSUB_ERR_KINK;
    case Errc::witness_not_found: return DSUB_ERR_WITNESS_NOT_FOUND;
  }
  return DSUB_ERR_INTERNAL;
}

template <class F>
dsub_status guarded(F&& body) {
  g_last_error.clear();
  g_last_position = -1;
  try {
    body();
    return DSUB_OK;
  } catch (const dsub::Error& e) {
    g_last_error = e.what();
    if (e.position()) g_last_position = static_cast<long>(*e.position());
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DSUB_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown internal error";
    return DSUB_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw dsub::Error(dsub::Errc::invalid_argument, what);
}

char* dup_string(const std::string& s) {
  char* p = new char[s.size() + 1];
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

dsub_options options_or_default(const dsub_options* o) {
  dsub_options d;
  dsub_options_default(&d);
  return o ? *o : d;
}

dsub::VerifyOptions verify_options(const dsub_options* o) {
  const dsub_options d = options_or_default(o);
  dsub::VerifyOptions v;
  v.eps_active = d.eps_active;
  v.rule_tol_scale = d.rule_tol_scale;
  return v;
}

std::span<const double> span_of(const double* p, std::size_t n) { return {p, n}; }

dsub::GridPtr grid_of(const dsub_grid* g) { return g ? g->value : nullptr; }

std::string report_array(const std::vector<dsub::VerificationReport>& reports, int* all_pass) {
  nlohmann::json arr = nlohmann::json::array();
  bool ok = true;
  for (const auto& r : reports) {
    arr.push_back(dsub::to_json(r));
    ok = ok && r.pass;
  }
  if (all_pass) *all_pass = ok ? 1 : 0;
  return arr.dump();
}

}  // namespace

extern "C" {

void dsub_options_default(dsub_options* opts) {
  if (!opts) return;
  opts->eps_active = dsub::kEpsActive;
  opts->eps_order = dsub::kEpsOrder;
  opts->rule_tol_scale = dsub::kRuleTolScale;
}

const char* dsub_last_error(void) { return g_last_error.c_str(); }
long dsub_last_error_position(void) { return g_last_position; }

const char* dsub_status_name(dsub_status s) {
  switch (s) {
    case DSUB_OK: return "ok";
    case DSUB_ERR_PARSE: return "parse error";
    case DSUB_ERR_UNKNOWN_IDENTIFIER: return "unknown identifier";
    case DSUB_ERR_ARITY: return "arity mismatch";
    case DSUB_ERR_DOMAIN: return "domain violation";
    case DSUB_ERR_DIVISION_BY_ZERO: return "division by zero";
    case DSUB_ERR_DIMENSION: return "dimension mismatch";
    case DSUB_ERR_GRID: return "grid mismatch";
    case DSUB_ERR_INVALID_ARGUMENT: return "invalid argument";
    case DSUB_ERR_KINK: return "kink at base point";
    case DSUB_ERR_WITNESS_NOT_FOUND: return "witness not found";
    case DSUB_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void dsub_string_free(char* s) { delete[] s; }

dsub_status dsub_expr_parse(const char* text, size_t arity, dsub_expr** out) {
  return guarded([&] {
    require(text && out, "dsub_expr_parse: null argument");
    *out = new dsub_expr{dsub::parse(text, arity)};
  });
}

void dsub_expr_free(dsub_expr* e) { delete e; }
size_t dsub_expr_arity(const dsub_expr* e) { return e ? e->value.arity() : 0; }

dsub_status dsub_expr_eval(const dsub_expr* e, const double* x, size_t n, double* out) {
  return guarded([&] {
    require(e && x && out, "dsub_expr_eval: null argument");
    *out = dsub::eval(e->value, span_of(x, n));
  });
}

dsub_status dsub_expr_dirderiv(const dsub_expr* e, const double* x, const double* l, size_t n,
                               double eps_active, double* out) {
  return guarded([&] {
    require(e && x && l && out, "dsub_expr_dirderiv: null argument");
    *out = dsub::dirderiv(e->value, span_of(x, n), span_of(l, n), eps_active);
  });
}

dsub_status dsub_expr_transform(const dsub_expr* e, const double* x, size_t n, double eps_active,
                                dsub_expr** out) {
  return guarded([&] {
    require(e && x && out, "dsub_expr_transform: null argument");
    *out = new dsub_expr{dsub::dirderiv_transform(e->value, span_of(x, n), eps_active)};
  });
}

dsub_status dsub_expr_to_json(const dsub_expr* e, char** out) {
  return guarded([&] {
    require(e && out, "dsub_expr_to_json: null argument");
    *out = dup_string(dsub::to_json(e->value).dump());
  });
}

dsub_status dsub_expr_to_string(const dsub_expr* e, char** out) {
  return guarded([&] {
    require(e && out, "dsub_expr_to_string: null argument");
    *out = dup_string(dsub::to_string(e->value));
  });
}

dsub_status dsub_grid_create(size_t dim, size_t resolution, dsub_grid** out) {
  return guarded([&] {
    require(out != nullptr, "dsub_grid_create: null argument");
    require(dim >= 2, "dsub_grid_create: grids exist for dim >= 2 (pass NULL for dim 1)");
    *out = new dsub_grid{dsub::SphereGrid::for_dimension(dim, resolution)};
  });
}

void dsub_grid_free(dsub_grid* g) { delete g; }
size_t dsub_grid_size(const dsub_grid* g) { return g ? g->value->size() : 0; }
size_t dsub_grid_dim(const dsub_grid* g) { return g ? g->value->dim() : 0; }
const char* dsub_grid_id(const dsub_grid* g) { return g ? g->value->id().c_str() : ""; }

dsub_status dsub_grid_direction(const dsub_grid* g, size_t k, double* out) {
  return guarded([&] {
    require(g && out, "dsub_grid_direction: null argument");
    require(k < g->value->size(), "dsub_grid_direction: index out of range");
    const auto d = g->value->direction(k);
    std::copy(d.begin(), d.end(), out);
  });
}

dsub_status dsub_subdiff(const dsub_expr* e, const double* x, size_t n, const dsub_grid* grid,
                         const dsub_options* opts, dsub_dirset** out) {
  return guarded([&] {
    require(e && x && out, "dsub_subdiff: null argument");
    const auto o = options_or_default(opts);
    *out = new dsub_dirset{dsub::directed_subdiff(e->value, span_of(x, n), grid_of(grid), o.eps_active)};
  });
}

dsub_status dsub_embed_gradient(const dsub_expr* e, const double* x, size_t n, const dsub_grid* grid,
                                const dsub_options* opts, dsub_dirset** out) {
  return guarded([&] {
    require(e && x && out, "dsub_embed_gradient: null argument");
    const auto o = options_or_default(opts);
    *out = new dsub_dirset{dsub::embed_gradient(e->value, span_of(x, n), grid_of(grid), o.eps_active)};
  });
}

dsub_status dsub_embed_polygon(const double* vertices, size_t count, const dsub_grid* grid,
                               dsub_dirset** out) {
  return guarded([&] {
    require(vertices && out, "dsub_embed_polygon: null argument");
    std::vector<dsub::Point2> pts(count);
    for (size_t i = 0; i < count; ++i) pts[i] = {vertices[2 * i], vertices[2 * i + 1]};
    *out = new dsub_dirset{dsub::embed_polygon(pts, grid_of(grid))};
  });
}

dsub_status dsub_dirset_zero(size_t dim, const dsub_grid* grid, dsub_dirset** out) {
  return guarded([&] {
    require(out != nullptr, "dsub_dirset_zero: null argument");
    *out = new dsub_dirset{dsub::directed_zero(dim, grid_of(grid))};
  });
}

void dsub_dirset_free(dsub_dirset* d) { delete d; }
size_t dsub_dirset_dim(const dsub_dirset* d) { return d ? d->value.dim() : 0; }
double dsub_dirset_norm(const dsub_dirset* d) { return d ? dsub::norm(d->value) : 0.0; }

dsub_status dsub_dirset_support_range(const dsub_dirset* d, double* lo, double* hi) {
  return guarded([&] {
    require(d && lo && hi, "dsub_dirset_support_range: null argument");
    const auto r = dsub::support_range(d->value);
    *lo = r[0];
    *hi = r[1];
  });
}

dsub_status dsub_dirset_interval(const dsub_dirset* d, double* a_neg, double* a_pos) {
  return guarded([&] {
    require(d && a_neg && a_pos, "dsub_dirset_interval: null argument");
    const auto& iv = d->value.interval();
    *a_neg = iv.a_neg;
    *a_pos = iv.a_pos;
  });
}

dsub_status dsub_dirset_lincomb(double alpha, const dsub_dirset* a, double beta, const dsub_dirset* b,
                                dsub_dirset** out) {
  return guarded([&] {
    require(a && b && out, "dsub_dirset_lincomb: null argument");
    *out = new dsub_dirset{dsub::linear_combination(alpha, a->value, beta, b->value)};
  });
}

namespace {
dsub_status lattice_call(const dsub_dirset* const* sets, size_t count, const dsub_options* opts,
                         dsub_dirset** out, bool is_sup) {
  return guarded([&] {
    require(sets && out, "dsub_dirset_sup/inf: null argument");
    std::vector<dsub::DirectedSet> v;
    for (size_t i = 0; i < count; ++i) {
      require(sets[i] != nullptr, "dsub_dirset_sup/inf: null set");
      v.push_back(sets[i]->value);
    }
    const double eps = options_or_default(opts).eps_active;
    *out = new dsub_dirset{is_sup ? dsub::sup(v, eps) : dsub::inf(v, eps)};
  });
}
}  // namespace

dsub_status dsub_dirset_sup(const dsub_dirset* const* sets, size_t count, const dsub_options* opts,
                            dsub_dirset** out) {
  return lattice_call(sets, count, opts, out, true);
}

dsub_status dsub_dirset_inf(const dsub_dirset* const* sets, size_t count, const dsub_options* opts,
                            dsub_dirset** out) {
  return lattice_call(sets, count, opts, out, false);
}

dsub_status dsub_dirset_leq(const dsub_dirset* a, const dsub_dirset* b, double eps, int* result) {
  return guarded([&] {
    require(a && b && result, "dsub_dirset_leq: null argument");
    *result = dsub::leq(a->value, b->value, eps) ? 1 : 0;
  });
}

dsub_status dsub_dirset_to_json(const dsub_dirset* d, char** out) {
  return guarded([&] {
    require(d && out, "dsub_dirset_to_json: null argument");
    *out = dup_string(dsub::to_json(d->value).dump());
  });
}

dsub_status dsub_dirset_from_json(const char* json, dsub_dirset** out) {
  return guarded([&] {
    require(json && out, "dsub_dirset_from_json: null argument");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(json);
    } catch (const nlohmann::json::exception& e) {
      throw dsub::Error(dsub::Errc::invalid_argument, std::string("invalid JSON: ") + e.what());
    }
    *out = new dsub_dirset{dsub::directed_set_from_json(j)};
  });
}

dsub_status dsub_dirset_segments_csv(const dsub_dirset* d, char** out) {
  return guarded([&] {
    require(d && out, "dsub_dirset_segments_csv: null argument");
    *out = dup_string(dsub::segments_csv(dsub::viz_segments(d->value)));
  });
}

dsub_status dsub_dirset_segments_svg(const dsub_dirset* d, char** out) {
  return guarded([&] {
    require(d && out, "dsub_dirset_segments_svg: null argument");
    *out = dup_string(dsub::segments_svg(dsub::viz_segments(d->value)));
  });
}

dsub_status dsub_dirset_inverted_count(const dsub_dirset* d, size_t* out) {
  return guarded([&] {
    require(d && out, "dsub_dirset_inverted_count: null argument");
    size_t c = 0;
    for (const auto& s : dsub::viz_segments(d->value)) c += s.inverted ? 1 : 0;
    *out = c;
  });
}

dsub_status dsub_verify(const dsub_verify_request* req, const dsub_options* opts, char** report_json,
                        int* all_pass) {
  return guarded([&] {
    require(req && req->rule && report_json, "dsub_verify: null argument");
    require(req->point != nullptr && req->n > 0, "dsub_verify: missing point");
    const std::string rule = req->rule;
    const auto x = span_of(req->point, req->n);
    const auto vopt = verify_options(opts);
    const std::size_t n = req->n;
    auto need = [](const char* s, const char* name) -> std::string {
      if (!s) throw dsub::Error(dsub::Errc::invalid_argument, std::string("rule needs ") + name);
      return s;
    };
    const std::size_t resolution = req->resolution ? req->resolution : 360;
    const dsub::GridPtr grid = n >= 2 ? dsub::SphereGrid::for_dimension(n, resolution) : nullptr;

    std::vector<dsub::VerificationReport> reports;
    if (rule == "sum" || rule == "product" || rule == "quotient" || rule == "max" || rule == "min") {
      const dsub::Expr f1 = dsub::parse(need(req->f1, "f1"), n);
      const dsub::Expr f2 = dsub::parse(need(req->f2, "f2"), n);
      if (rule == "sum") reports.push_back(dsub::verify_sum_rule(f1, f2, req->alpha, req->beta, x, grid, vopt));
      if (rule == "product") reports.push_back(dsub::verify_product_rule(f1, f2, x, grid, vopt));
      if (rule == "quotient") reports.push_back(dsub::verify_quotient_rule(f1, f2, x, grid, vopt));
      if (rule == "max" || rule == "min") {
        std::vector<dsub::Expr> fs{f1, f2};
        for (size_t i = 0; i < req->function_count; ++i) fs.push_back(dsub::parse(req->functions[i], n));
        reports.push_back(rule == "max" ? dsub::verify_max_rule(fs, x, grid, vopt)
                                        : dsub::verify_min_rule(fs, x, grid, vopt));
      }
    } else if (rule == "fixpoint") {
      reports.push_back(dsub::verify_dirderiv_fixpoint(dsub::parse(need(req->f, "f"), n), x, grid, vopt));
    } else if (rule == "taylor" || rule == "chain1d") {
      require(req->inner_count > 0 && req->inner != nullptr, "rule needs inner maps");
      const dsub::Expr g = dsub::parse(need(req->f, "f"), req->inner_count);
      std::vector<dsub::Expr> phi;
      for (size_t i = 0; i < req->inner_count; ++i) phi.push_back(dsub::parse(req->inner[i], n));
      if (rule == "taylor") {
        reports.push_back(dsub::verify_taylor_invariance(g, phi, x, grid, vopt));
      } else {
        require(n == 1, "chain1d takes a single point t0");
        reports.push_back(dsub::verify_chain_rule_1d(g, phi, x[0], vopt));
      }
    } else {
      throw dsub::Error(dsub::Errc::invalid_argument, "unknown rule '" + rule + "'");
    }
    *report_json = dup_string(report_array(reports, all_pass));
  });
}

dsub_status dsub_verify_random(const char* rule, size_t count, unsigned long long seed, size_t resolution,
                               const dsub_options* opts, char** report_json, int* all_pass,
                               size_t* report_count) {
  return guarded([&] {
    require(rule && report_json, "dsub_verify_random: null argument");
    const auto reports = dsub::run_random_suite(rule, count, seed, resolution ? resolution : 180,
                                                verify_options(opts));
    if (report_count) *report_count = reports.size();
    *report_json = dup_string(report_array(reports, all_pass));
  });
}

dsub_status dsub_optcheck(const dsub_expr* e, const double* x, size_t n, const dsub_grid* grid,
                          const dsub_options* opts, int* min_candidate, int* max_candidate) {
  return guarded([&] {
    require(e && x && min_candidate && max_candidate, "dsub_optcheck: null argument");
    const auto o = options_or_default(opts);
    *min_candidate = dsub::check_min_condition(e->value, span_of(x, n), grid_of(grid), o.eps_order,
                                               o.eps_active) ? 1 : 0;
    *max_candidate = dsub::check_max_condition(e->value, span_of(x, n), grid_of(grid), o.eps_order,
                                               o.eps_active) ? 1 : 0;
  });
}

dsub_status dsub_mvt(const dsub_expr* g, const double* x0, const double* x1, size_t n, size_t scan_points,
                     double eps, const dsub_options* opts, dsub_mvt_result* out, double* x_hat) {
  return guarded([&] {
    require(g && x0 && x1 && out, "dsub_mvt: null argument");
    const auto o = options_or_default(opts);
    const auto w = dsub::mvt_witness(g->value, span_of(x0, n), span_of(x1, n), scan_points, eps, o.eps_active);
    out->t_hat = w.t_hat;
    out->residual = w.residual;
    out->a_neg = w.interval.a_neg;
    out->a_pos = w.interval.a_pos;
    out->from_scan = w.from_scan ? 1 : 0;
    if (x_hat) std::copy(w.x_hat.begin(), w.x_hat.end(), x_hat);
  });
}

}  // extern "C"
