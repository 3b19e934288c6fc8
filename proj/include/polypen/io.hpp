#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "polypen/circuit.hpp"
#include "polypen/scaling.hpp"
#include "polypen/solver.hpp"

namespace polypen {

inline constexpr int kSchemaVersion = 1;

// A problem document: Q, q, A, v are required; m, alpha, N, x1,
// step_policy ("reciprocal-L" or an array of step sizes) and seed are optional.
// Unknown keys are rejected.
struct ProblemFile {
  Problem problem;
  std::optional<double> m;
  std::optional<double> alpha;
  std::optional<int> N;
  std::optional<Vector> x1;
  StepPolicy step_policy;
  std::optional<std::uint64_t> seed;
};

// Throws ValidationError naming the offending key.
ProblemFile parse_problem_file(std::string_view json_text);

// Normalized document (symmetrized matrices). Parsing it back yields a
// bitwise-identical problem.
std::string dump_problem_file(const ProblemFile& pf);

// 17 significant digits (%.17g): round-trips every double exactly.
std::string format_double(double v);

// k,x[0],...,x[n-1],f,g,J,grad_norm,gamma
std::string trace_csv(const SolveTrace& t);
std::string trace_json(const SolveTrace& t);

std::string scaling_report_json(const ScalingReport& r);
std::string circuit_stats_json(const CircuitStats& s);
// Both power strategies for the given n and N.
std::string depth_plan_json(int n, int N, const SecretMarks& marks = {});

}  // namespace polypen
