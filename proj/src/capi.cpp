#include "polypen/polypen.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "polypen/circuit.hpp"
#include "polypen/error.hpp"
#include "polypen/io.hpp"
#include "polypen/minab.hpp"
#include "polypen/scaling.hpp"
#include "polypen/solver.hpp"

struct pp_problem {
  polypen::ProblemFile file;
};

struct pp_trace {
  polypen::SolveTrace trace;
  double final_f = 0.0;
  std::optional<polypen::CircuitStats> stats;
  std::optional<double> fixed_deviation;
  std::optional<int> fixed_overflow_k;
};

namespace {

thread_local std::string last_error;
thread_local std::string last_field;

void set_error(std::string msg, std::string field = {}) {
  last_error = std::move(msg);
  last_field = std::move(field);
}

template <class F>
pp_status guarded(F&& body) {
  set_error({});
  try {
    return body();
  } catch (const polypen::ValidationError& e) {
    set_error(e.what(), e.field());
    return PP_ERR_VALIDATION;
  } catch (const polypen::NumericError& e) {
    set_error(e.what());
    return PP_ERR_NUMERIC;
  } catch (const polypen::NonPolynomialOperation& e) {
    set_error(e.what());
    return PP_ERR_NON_POLYNOMIAL;
  } catch (const std::bad_alloc&) {
    set_error("out of memory");
    return PP_ERR_INTERNAL;
  } catch (const std::exception& e) {
    set_error(e.what());
    return PP_ERR_INTERNAL;
  }
}

pp_status invalid(const char* what) {
  set_error(what);
  return PP_ERR_INVALID_ARGUMENT;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

pp_circuit_stats to_c(const polypen::CircuitStats& s) {
  return {s.adds, s.ct_ct_muls, s.ct_pt_muls, s.max_level, s.plain_ops, s.non_polynomial_events};
}

polypen::CircuitStats from_c(const pp_circuit_stats& s) {
  polypen::CircuitStats out;
  out.adds = s.adds;
  out.ct_ct_muls = s.ct_ct_muls;
  out.ct_pt_muls = s.ct_pt_muls;
  out.max_level = s.max_level;
  out.plain_ops = s.plain_ops;
  out.non_polynomial_events = s.non_polynomial_events;
  return out;
}

polypen::PowerStrategy to_strategy(pp_power_strategy p) {
  return p == PP_POWER_SEQUENTIAL ? polypen::PowerStrategy::sequential
                                  : polypen::PowerStrategy::repeated_squaring;
}

}  // namespace

extern "C" {

const char* pp_version(void) { return "1.0.0"; }
const char* pp_last_error(void) { return last_error.c_str(); }
const char* pp_last_error_field(void) { return last_field.c_str(); }
void pp_string_free(char* s) { std::free(s); }

pp_status pp_problem_create(size_t n, const double* Q, const double* q, const double* A,
                            const double* v, pp_problem** out) {
  if (!out || !Q || !q || !A || !v || n == 0) return invalid("null argument or n = 0");
  *out = nullptr;
  return guarded([&] {
    const auto N = static_cast<Eigen::Index>(n);
    polypen::Matrix Qm = Eigen::Map<const polypen::Matrix>(Q, N, N);
    polypen::Matrix Am = Eigen::Map<const polypen::Matrix>(A, N, N);
    polypen::Vector qv = Eigen::Map<const polypen::Vector>(q, N);
    polypen::Vector vv = Eigen::Map<const polypen::Vector>(v, N);
    polypen::Problem p(polypen::QuadraticCost(Qm, qv), polypen::Ellipsoid(Am, vv));
    *out = new pp_problem{polypen::ProblemFile{std::move(p), {}, {}, {}, {}, {}, {}}};
    return PP_OK;
  });
}

pp_status pp_problem_from_json(const char* json, pp_problem** out) {
  if (!out || !json) return invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new pp_problem{polypen::parse_problem_file(json)};
    return PP_OK;
  });
}

pp_status pp_problem_to_json(const pp_problem* p, char** out) {
  if (!p || !out) return invalid("null argument");
  return guarded([&] {
    *out = dup_string(polypen::dump_problem_file(p->file));
    return PP_OK;
  });
}

void pp_problem_free(pp_problem* p) { delete p; }

size_t pp_problem_dim(const pp_problem* p) {
  return p ? static_cast<size_t>(p->file.problem.dim()) : 0;
}

double pp_problem_asymmetry(const pp_problem* p) {
  if (!p) return 0.0;
  return std::max(p->file.problem.cost().asymmetry(), p->file.problem.constraint().asymmetry());
}

pp_status pp_problem_eval(const pp_problem* p, const double* x, double* f, double* g) {
  if (!p || !x) return invalid("null argument");
  return guarded([&] {
    const polypen::Vector xv =
        Eigen::Map<const polypen::Vector>(x, p->file.problem.dim());
    if (f) *f = polypen::eval_f(p->file.problem, xv);
    if (g) *g = polypen::eval_g(p->file.problem, xv);
    return PP_OK;
  });
}

pp_status pp_problem_file_options(const pp_problem* p, pp_file_options* out) {
  if (!p || !out) return invalid("null argument");
  const auto& f = p->file;
  *out = pp_file_options{};
  out->has_m = f.m.has_value();
  out->m = f.m.value_or(0.0);
  out->has_alpha = f.alpha.has_value();
  out->alpha = f.alpha.value_or(1.0);
  out->has_iterations = f.N.has_value();
  out->iterations = f.N.value_or(0);
  out->has_seed = f.seed.has_value();
  out->seed = f.seed.value_or(0);
  set_error({});
  return PP_OK;
}

void pp_scaling_options_init(pp_scaling_options* opt) {
  if (!opt) return;
  const polypen::ScalingOptions d;
  opt->samples = d.samples;
  opt->seed = d.seed;
  opt->safety = d.safety;
}

pp_status pp_estimate_scaling(const pp_problem* p, const pp_scaling_options* opt,
                              pp_scaling_report* out) {
  if (!p || !out) return invalid("null argument");
  return guarded([&] {
    polypen::ScalingOptions o;
    if (opt) {
      o.samples = opt->samples;
      o.seed = opt->seed;
      o.safety = opt->safety;
    }
    const auto r = polypen::estimate_scaling(p->file.problem, o);
    *out = pp_scaling_report{r.m_min_hat, r.m_min, r.m_inv, r.samples, r.certified ? 1 : 0};
    return PP_OK;
  });
}

pp_status pp_scaling_report_json(const pp_scaling_report* r, char** out) {
  if (!r || !out) return invalid("null argument");
  return guarded([&] {
    polypen::ScalingReport rep;
    rep.m_min_hat = r->m_min_hat;
    rep.m_min = r->m_min;
    rep.m_inv = r->m_inv;
    rep.samples = r->samples;
    rep.certified = r->certified != 0;
    *out = dup_string(polypen::scaling_report_json(rep));
    return PP_OK;
  });
}

pp_status pp_verify_requirements(const pp_problem* p, double m, int samples, uint64_t seed,
                                 size_t* violations) {
  if (!p || !violations) return invalid("null argument");
  return guarded([&] {
    *violations = polypen::verify_requirements(p->file.problem, m, samples, seed).size();
    return PP_OK;
  });
}

void pp_solve_options_init(pp_solve_options* opt) {
  if (!opt) return;
  *opt = pp_solve_options{};
  opt->iterations = polypen::SolverConfig{}.iterations;
  opt->power = PP_POWER_REPEATED_SQUARING;
}

pp_status pp_solve(const pp_problem* p, const pp_solve_options* opt, pp_trace** out) {
  if (!p || !opt || !out) return invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    const auto& prob = p->file.problem;
    polypen::SolverConfig cfg;
    cfg.iterations = opt->iterations;
    cfg.m = opt->m;
    cfg.step_policy = p->file.step_policy;
    if (opt->x1) {
      cfg.x1 = Eigen::Map<const polypen::Vector>(opt->x1, prob.dim());
    } else {
      cfg.x1 = p->file.x1;
    }
    cfg.diagnostics = opt->diagnostics != 0;
    cfg.power = to_strategy(opt->power);
    if (opt->has_m_inv) cfg.m_inv = opt->m_inv;

    auto t = std::make_unique<pp_trace>();
    if (opt->circuit) {
      auto r = polypen::tape_solve(prob, cfg);
      t->trace = std::move(r.trace);
      t->stats = r.stats;
    } else {
      t->trace = polypen::solve(prob, cfg);
    }
    if (opt->fixed_point_bits != 0) {
      const auto fx = polypen::fixed_point_solve(prob, cfg, opt->fixed_point_bits);
      t->fixed_deviation = fx.max_deviation;
      t->fixed_overflow_k = fx.overflow_k;
    }
    t->final_f = polypen::eval_f(prob, t->trace.final_x);
    *out = t.release();
    return PP_OK;
  });
}

void pp_trace_free(pp_trace* t) { delete t; }

size_t pp_trace_dim(const pp_trace* t) {
  return t ? static_cast<size_t>(t->trace.final_x.size()) : 0;
}

pp_status pp_trace_final_x(const pp_trace* t, double* out, size_t n) {
  if (!t || !out) return invalid("null argument");
  if (n != pp_trace_dim(t)) return invalid("buffer length does not match the dimension");
  for (size_t i = 0; i < n; ++i) out[i] = t->trace.final_x(static_cast<Eigen::Index>(i));
  set_error({});
  return PP_OK;
}

pp_status pp_trace_summary_get(const pp_trace* t, pp_trace_summary* out) {
  if (!t || !out) return invalid("null argument");
  *out = pp_trace_summary{};
  out->iterations = t->trace.records.size();
  out->final_f = t->final_f;
  out->final_g = t->trace.final_g;
  out->certified = t->trace.certified ? 1 : 0;
  out->diagnostics_run = t->trace.invariance.has_value() ? 1 : 0;
  if (t->trace.invariance && *t->trace.invariance) out->invariance_violation_k = **t->trace.invariance;
  if (t->trace.descent && *t->trace.descent) out->descent_violation_k = **t->trace.descent;
  out->has_circuit_stats = t->stats.has_value() ? 1 : 0;
  out->has_fixed_point = t->fixed_deviation.has_value() ? 1 : 0;
  out->fixed_point_deviation = t->fixed_deviation.value_or(0.0);
  out->fixed_point_overflow_k = t->fixed_overflow_k.value_or(-1);
  set_error({});
  return PP_OK;
}

pp_status pp_trace_circuit_stats(const pp_trace* t, pp_circuit_stats* out) {
  if (!t || !out) return invalid("null argument");
  if (!t->stats) return invalid("trace was not recorded through the circuit");
  *out = to_c(*t->stats);
  set_error({});
  return PP_OK;
}

pp_status pp_trace_csv(const pp_trace* t, char** out) {
  if (!t || !out) return invalid("null argument");
  return guarded([&] {
    *out = dup_string(polypen::trace_csv(t->trace));
    return PP_OK;
  });
}

pp_status pp_trace_json(const pp_trace* t, char** out) {
  if (!t || !out) return invalid("null argument");
  return guarded([&] {
    *out = dup_string(polypen::trace_json(t->trace));
    return PP_OK;
  });
}

pp_status pp_circuit_stats_json(const pp_circuit_stats* s, char** out) {
  if (!s || !out) return invalid("null argument");
  return guarded([&] {
    *out = dup_string(polypen::circuit_stats_json(from_c(*s)));
    return PP_OK;
  });
}

pp_status pp_plan_depth_json(int n, int iterations, char** out) {
  if (!out) return invalid("null argument");
  return guarded([&] {
    *out = dup_string(polypen::depth_plan_json(n, iterations));
    return PP_OK;
  });
}

pp_status pp_plan_depth_total(int n, int iterations, pp_power_strategy power, int* out) {
  if (!out) return invalid("null argument");
  return guarded([&] {
    *out = polypen::plan_depth(n, iterations, to_strategy(power)).total_level;
    return PP_OK;
  });
}

pp_status pp_minab(double a, double b, double alpha, int iterations, int circuit,
                   pp_minab_result* out, double* xs) {
  if (!out) return invalid("null argument");
  return guarded([&] {
    const polypen::MinProblem mp(a, b, alpha);
    if (iterations < 0) throw polypen::ValidationError("N", "must be >= 0");
    const auto run = polypen::run_minab(mp, iterations, circuit != 0);
    *out = pp_minab_result{};
    out->result = run.result;
    out->degenerate = mp.degenerate() ? 1 : 0;
    out->m = mp.m();
    out->auxiliary_error =
        mp.degenerate() ? 0.0 : polypen::auxiliary_error(mp, iterations < 1 ? 1 : iterations);
    if (run.stats) {
      out->has_circuit_stats = 1;
      out->stats = to_c(*run.stats);
    }
    if (xs) {
      for (size_t i = 0; i < run.xs.size(); ++i) xs[i] = run.xs[i];
    }
    return PP_OK;
  });
}

}  // extern "C"
