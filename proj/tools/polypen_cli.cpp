// polypen: command-line front end over the C API.
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "polypen/polypen.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

struct Failure {
  int code;
  std::string message;
};

int exit_code(pp_status s) {
  switch (s) {
    case PP_OK:
      return kExitOk;
    case PP_ERR_INVALID_ARGUMENT:
    case PP_ERR_VALIDATION:
      return kExitValidation;
    default:
      return kExitNumeric;
  }
}

void check(pp_status s) {
  if (s != PP_OK) throw Failure{exit_code(s), pp_last_error()};
}

std::string take(char* s) {
  std::string out(s);
  pp_string_free(s);
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_input(const std::string& path) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), {}};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitValidation, "input: cannot open " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{kExitValidation, "output: cannot write " + path};
  out << text;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

using ProblemPtr = std::unique_ptr<pp_problem, decltype(&pp_problem_free)>;
using TracePtr = std::unique_ptr<pp_trace, decltype(&pp_trace_free)>;

ProblemPtr load_problem(const std::string& path) {
  const std::string text = read_input(path);
  pp_problem* p = nullptr;
  check(pp_problem_from_json(text.c_str(), &p));
  ProblemPtr owned(p, &pp_problem_free);
  const double asym = pp_problem_asymmetry(p);
  if (asym > 1e-9) {
    std::cerr << "warning: Q/A asymmetric by " << fmt(asym) << "; symmetrized\n";
  }
  return owned;
}

struct Flags {
  std::string input;
  std::string output;
  std::optional<int> iters;
  std::optional<double> m;
  std::optional<double> alpha;
  std::optional<std::uint64_t> seed;
  int samples = 256;
  bool circuit = false;
  int fixed_point_bits = 0;
  bool diagnostics = false;
  bool dump_normalized = false;
  bool strict = false;
  double a = 0.0;
  double b = 0.0;
  int n = 1;
};

// --seed, then the problem file, then POLYPEN_SEED, then 0.
std::uint64_t resolve_seed(const Flags& f, const pp_file_options* file) {
  if (f.seed) return *f.seed;
  if (file && file->has_seed) return file->seed;
  if (const char* env = std::getenv("POLYPEN_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Failure{kExitValidation, "POLYPEN_SEED: expected a nonnegative integer"};
    }
  }
  return 0;
}

pp_scaling_options scaling_options(const Flags& f, const pp_file_options* file) {
  pp_scaling_options o;
  pp_scaling_options_init(&o);
  o.samples = f.samples;
  o.seed = resolve_seed(f, file);
  return o;
}

void print_stats(const pp_circuit_stats& s) {
  char* json = nullptr;
  check(pp_circuit_stats_json(&s, &json));
  std::cout << "circuit: " << nlohmann::json::parse(take(json)).dump() << "\n";
}

int cmd_solve(const Flags& f) {
  auto problem = load_problem(f.input);
  pp_file_options file;
  check(pp_problem_file_options(problem.get(), &file));

  pp_solve_options opt;
  pp_solve_options_init(&opt);
  if (f.iters) {
    opt.iterations = *f.iters;
  } else if (file.has_iterations) {
    opt.iterations = file.iterations;
  }

  const pp_scaling_options sopt = scaling_options(f, &file);
  pp_scaling_report report{};
  bool have_report = false;
  std::optional<double> m = f.m;
  if (!m && file.has_m) m = file.m;
  if (m) {
    // Only needed for the certificate; failure just leaves the run uncertified.
    have_report = pp_estimate_scaling(problem.get(), &sopt, &report) == PP_OK;
    if (!have_report) std::cerr << "warning: scaling estimation failed: " << pp_last_error() << "\n";
  } else {
    check(pp_estimate_scaling(problem.get(), &sopt, &report));
    have_report = true;
    const double alpha = f.alpha ? *f.alpha : (file.has_alpha ? file.alpha : 1.0);
    m = alpha * report.m_inv;
  }
  opt.m = *m;
  if (have_report) {
    opt.has_m_inv = 1;
    opt.m_inv = report.m_inv;
  }
  opt.diagnostics = f.diagnostics ? 1 : 0;
  opt.circuit = f.circuit ? 1 : 0;
  opt.fixed_point_bits = f.fixed_point_bits;

  pp_trace* raw = nullptr;
  check(pp_solve(problem.get(), &opt, &raw));
  TracePtr trace(raw, &pp_trace_free);

  nlohmann::json scaling = nullptr;
  if (have_report) {
    char* s = nullptr;
    check(pp_scaling_report_json(&report, &s));
    scaling = nlohmann::json::parse(take(s));
  }

  if (!f.output.empty()) {
    if (ends_with(f.output, ".json")) {
      char* s = nullptr;
      check(pp_trace_json(trace.get(), &s));
      nlohmann::json doc = nlohmann::json::parse(take(s));
      doc["scaling"] = scaling;
      write_output(f.output, doc.dump(2) + "\n");
    } else {
      char* s = nullptr;
      check(pp_trace_csv(trace.get(), &s));
      std::string header = "# m=" + fmt(opt.m) + "\n";
      if (have_report) {
        header += "# scaling " + scaling.dump() + "\n";
      }
      write_output(f.output, header + take(s));
    }
  }

  pp_trace_summary sum;
  check(pp_trace_summary_get(trace.get(), &sum));
  std::vector<double> x(pp_trace_dim(trace.get()));
  check(pp_trace_final_x(trace.get(), x.data(), x.size()));

  std::cout << "m: " << fmt(opt.m) << "\n";
  std::cout << "iterations: " << sum.iterations << "\n";
  std::cout << "x:";
  for (double xi : x) std::cout << ' ' << fmt(xi);
  std::cout << "\nf: " << fmt(sum.final_f) << "\ng: " << fmt(sum.final_g) << "\n";
  std::cout << "status: " << (sum.certified ? "certified" : "uncertified");
  if (have_report) std::cout << " (m_inv " << fmt(report.m_inv) << ")";
  std::cout << "\n";
  if (sum.diagnostics_run) {
    std::cout << "invariance: "
              << (sum.invariance_violation_k ? "violated at k=" + std::to_string(sum.invariance_violation_k)
                                             : std::string("ok"))
              << "\n";
    std::cout << "descent: "
              << (sum.descent_violation_k ? "violated at k=" + std::to_string(sum.descent_violation_k)
                                          : std::string("ok"))
              << "\n";
  }
  if (sum.has_circuit_stats) {
    pp_circuit_stats s;
    check(pp_trace_circuit_stats(trace.get(), &s));
    print_stats(s);
  }
  if (sum.has_fixed_point) {
    std::cout << "fixed-point deviation: " << fmt(sum.fixed_point_deviation);
    if (sum.fixed_point_overflow_k >= 0) {
      std::cout << " (overflow at k=" << sum.fixed_point_overflow_k << ")";
    }
    std::cout << "\n";
  }
  return kExitOk;
}

int cmd_minab(const Flags& f) {
  if (f.strict && f.a == f.b) {
    throw Failure{kExitValidation, "a, b: equal inputs rejected under --strict"};
  }
  const int iters = f.iters.value_or(1);
  if (iters < 0) throw Failure{kExitValidation, "iters: must be >= 0"};
  const double alpha = f.alpha.value_or(1.0);
  std::vector<double> xs(static_cast<std::size_t>(iters) + 1);
  pp_minab_result r;
  check(pp_minab(f.a, f.b, alpha, iters, f.circuit ? 1 : 0, &r, xs.data()));
  if (!std::isfinite(r.result)) throw Failure{kExitNumeric, "result is not finite"};
  std::cout << "k,x\n";
  for (std::size_t i = 0; i < xs.size(); ++i) std::cout << i + 1 << ',' << fmt(xs[i]) << "\n";
  if (r.has_circuit_stats) print_stats(r.stats);
  std::cout << "result: " << fmt(r.result) << "\n";
  return kExitOk;
}

int cmd_estimate_m(const Flags& f) {
  auto problem = load_problem(f.input);
  pp_file_options file;
  check(pp_problem_file_options(problem.get(), &file));
  const pp_scaling_options sopt = scaling_options(f, &file);
  pp_scaling_report report;
  check(pp_estimate_scaling(problem.get(), &sopt, &report));
  char* s = nullptr;
  check(pp_scaling_report_json(&report, &s));
  std::cout << take(s) << "\n";
  return kExitOk;
}

int cmd_plan_depth(const Flags& f) {
  int n = f.n;
  int N = f.iters.value_or(0);
  if (!f.input.empty()) {
    auto problem = load_problem(f.input);
    n = static_cast<int>(pp_problem_dim(problem.get()));
    pp_file_options file;
    check(pp_problem_file_options(problem.get(), &file));
    if (!f.iters && file.has_iterations) N = file.iterations;
  }
  if (N < 1) throw Failure{kExitValidation, "iters: plan-depth needs --iters >= 1"};
  char* s = nullptr;
  check(pp_plan_depth_json(n, N, &s));
  std::cout << take(s) << "\n";
  return kExitOk;
}

int cmd_validate(const Flags& f) {
  auto problem = load_problem(f.input);
  if (f.dump_normalized) {
    char* s = nullptr;
    check(pp_problem_to_json(problem.get(), &s));
    std::cout << take(s) << "\n";
    return kExitOk;
  }
  nlohmann::json doc{{"schema_version", 1},
                     {"valid", true},
                     {"n", pp_problem_dim(problem.get())},
                     {"asymmetry", pp_problem_asymmetry(problem.get())}};
  std::cout << doc.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ellipsoid-constrained quadratic programs with additions and multiplications only"};
  app.require_subcommand(1);
  Flags f;

  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", f.seed, "Sampling seed (fallback: file seed, then POLYPEN_SEED)");
    sub->add_option("--samples", f.samples, "Boundary samples for scaling estimation")
        ->check(CLI::PositiveNumber);
  };

  auto* solve = app.add_subcommand("solve", "Run the penalty gradient iteration");
  solve->add_option("--input", f.input, "Problem file (JSON, '-' for stdin)")->required();
  solve->add_option("--output", f.output, "Trace file (.json for JSON, otherwise CSV; - for stdout)");
  solve->add_option("--iters", f.iters, "Number of steps N");
  solve->add_option("--m", f.m, "Penalty scaling; estimated when absent");
  solve->add_option("--alpha", f.alpha, "Multiplier on the estimated m");
  solve->add_flag("--circuit", f.circuit, "Record the run on the arithmetic tape");
  solve->add_option("--fixed-point-bits", f.fixed_point_bits, "Also run in fixed point");
  solve->add_flag("--diagnostics", f.diagnostics, "Check invariance and descent");
  add_seed(solve);

  auto* minab = app.add_subcommand("minab", "min(a, b) by penalty iteration");
  minab->add_option("--a", f.a)->required();
  minab->add_option("--b", f.b)->required();
  minab->add_option("--alpha", f.alpha, "m = alpha |a - b| / 4");
  minab->add_option("--iters", f.iters, "Number of steps (default 1)");
  minab->add_flag("--circuit", f.circuit, "Record on the arithmetic tape and print counts");
  minab->add_flag("--strict", f.strict, "Reject a = b");

  auto* est = app.add_subcommand("estimate-m", "Estimate the penalty scalings m_min and m_inv");
  est->add_option("--input", f.input, "Problem file")->required();
  add_seed(est);

  auto* plan = app.add_subcommand("plan-depth", "Multiplicative depth per step");
  plan->add_option("--input", f.input, "Problem file (sets n, and N if present)");
  plan->add_option("--iters", f.iters, "Number of steps N");
  plan->add_option("--n", f.n, "Dimension when no input is given")->check(CLI::PositiveNumber);

  auto* validate = app.add_subcommand("validate", "Check a problem file");
  validate->add_option("--input", f.input, "Problem file")->required();
  validate->add_flag("--dump-normalized", f.dump_normalized, "Print the symmetrized problem file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (solve->parsed()) return cmd_solve(f);
    if (minab->parsed()) return cmd_minab(f);
    if (est->parsed()) return cmd_estimate_m(f);
    if (plan->parsed()) return cmd_plan_depth(f);
    return cmd_validate(f);
  } catch (const Failure& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  }
}
