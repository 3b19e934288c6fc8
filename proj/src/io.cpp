#include "polypen/io.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include <json.hpp>

#include "polypen/error.hpp"

namespace polypen {

using nlohmann::json;

namespace {

double number_at(const json& j, const std::string& field) {
  if (!j.is_number()) {
    throw ValidationError(field, "expected a number");
  }
  const double v = j.get<double>();
  if (!std::isfinite(v)) {
    throw ValidationError(field, "number is not finite");
  }
  return v;
}

Vector parse_vector(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) {
    throw ValidationError(field, "expected a non-empty array of numbers");
  }
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = number_at(j[i], field);
  }
  return v;
}

Matrix parse_matrix(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) {
    throw ValidationError(field, "expected a non-empty array of rows");
  }
  const auto n = static_cast<Eigen::Index>(j.size());
  Matrix M(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw ValidationError(field, "expected a square matrix of size " + std::to_string(n));
    }
    for (Eigen::Index c = 0; c < n; ++c) {
      M(i, c) = number_at(row[static_cast<std::size_t>(c)], field);
    }
  }
  return M;
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json matrix_json(const Matrix& M) {
  json out = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(i, c));
    out.push_back(std::move(row));
  }
  return out;
}

const json& required(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) {
    throw ValidationError(key, "missing required key");
  }
  return *it;
}

json check_json(const std::optional<CheckResult>& c) {
  if (!c) return nullptr;
  if (!*c) return "ok";
  return **c;
}

}  // namespace

ProblemFile parse_problem_file(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError("", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ValidationError("", "problem file must be a JSON object");
  }
  static const std::set<std::string> known = {"Q", "q", "A", "v", "m",
                                              "alpha", "N", "x1", "step_policy", "seed"};
  for (const auto& [key, _] : doc.items()) {
    if (!known.contains(key)) {
      throw ValidationError(key, "unknown key");
    }
  }

  Problem problem(QuadraticCost(parse_matrix(required(doc, "Q"), "Q"),
                                parse_vector(required(doc, "q"), "q")),
                  Ellipsoid(parse_matrix(required(doc, "A"), "A"),
                            parse_vector(required(doc, "v"), "v")));
  ProblemFile pf{std::move(problem), {}, {}, {}, {}, {}, {}};

  if (doc.contains("m")) {
    pf.m = number_at(doc["m"], "m");
    if (*pf.m < 0.0) throw ValidationError("m", "must be >= 0");
  }
  if (doc.contains("alpha")) {
    pf.alpha = number_at(doc["alpha"], "alpha");
    if (!(*pf.alpha > 0.0)) throw ValidationError("alpha", "must be > 0");
  }
  if (doc.contains("N")) {
    if (!doc["N"].is_number_integer() || doc["N"].get<long long>() < 1) {
      throw ValidationError("N", "expected a positive integer");
    }
    pf.N = doc["N"].get<int>();
  }
  if (doc.contains("x1")) {
    pf.x1 = parse_vector(doc["x1"], "x1");
    detail::require_dim(*pf.x1, pf.problem.dim(), "x1");
  }
  if (doc.contains("step_policy")) {
    const json& sp = doc["step_policy"];
    if (sp.is_string()) {
      if (sp.get<std::string>() != "reciprocal-L") {
        throw ValidationError("step_policy", "expected \"reciprocal-L\" or an array of step sizes");
      }
    } else {
      const Vector g = parse_vector(sp, "step_policy");
      pf.step_policy.sequence.assign(g.data(), g.data() + g.size());
    }
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_integer() || doc["seed"].get<long long>() < 0) {
      throw ValidationError("seed", "expected a nonnegative integer");
    }
    pf.seed = doc["seed"].get<std::uint64_t>();
  }
  return pf;
}

std::string dump_problem_file(const ProblemFile& pf) {
  json doc;
  doc["Q"] = matrix_json(pf.problem.cost().Q());
  doc["q"] = vector_json(pf.problem.cost().q());
  doc["A"] = matrix_json(pf.problem.constraint().A());
  doc["v"] = vector_json(pf.problem.constraint().v());
  if (pf.m) doc["m"] = *pf.m;
  if (pf.alpha) doc["alpha"] = *pf.alpha;
  if (pf.N) doc["N"] = *pf.N;
  if (pf.x1) doc["x1"] = vector_json(*pf.x1);
  if (pf.step_policy.reciprocal_L()) {
    doc["step_policy"] = "reciprocal-L";
  } else {
    doc["step_policy"] = pf.step_policy.sequence;
  }
  if (pf.seed) doc["seed"] = *pf.seed;
  return doc.dump(2);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trace_csv(const SolveTrace& t) {
  std::ostringstream os;
  const Eigen::Index n = t.final_x.size();
  os << "k";
  for (Eigen::Index i = 0; i < n; ++i) os << ",x[" << i << "]";
  os << ",f,g,J,grad_norm,gamma\n";
  for (const auto& r : t.records) {
    os << r.k;
    for (Eigen::Index i = 0; i < n; ++i) os << ',' << format_double(r.x(i));
    os << ',' << format_double(r.f) << ',' << format_double(r.g) << ',' << format_double(r.J)
       << ',' << format_double(r.grad_norm) << ',' << format_double(r.gamma) << '\n';
  }
  return os.str();
}

std::string trace_json(const SolveTrace& t) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["m"] = t.m;
  doc["certified"] = t.certified;
  json records = json::array();
  for (const auto& r : t.records) {
    records.push_back({{"k", r.k},
                       {"x", vector_json(r.x)},
                       {"f", r.f},
                       {"g", r.g},
                       {"J", r.J},
                       {"J_next", r.J_next},
                       {"grad_norm", r.grad_norm},
                       {"gamma", r.gamma}});
  }
  doc["records"] = std::move(records);
  doc["final_x"] = vector_json(t.final_x);
  doc["final_g"] = t.final_g;
  doc["invariance"] = check_json(t.invariance);
  doc["descent"] = check_json(t.descent);
  return doc.dump(2);
}

std::string scaling_report_json(const ScalingReport& r) {
  json doc{{"schema_version", kSchemaVersion},
           {"m_min_hat", r.m_min_hat},
           {"m_min", r.m_min},
           {"m_inv", r.m_inv},
           {"samples", r.samples},
           {"certified", r.certified}};
  return doc.dump(2);
}

namespace {

json stats_json(const CircuitStats& s) {
  return {{"adds", s.adds},
          {"ct_ct_muls", s.ct_ct_muls},
          {"ct_pt_muls", s.ct_pt_muls},
          {"max_level", s.max_level},
          {"plain_ops", s.plain_ops},
          {"non_polynomial_events", s.non_polynomial_events}};
}

json plan_json(const DepthPlan& plan) {
  json rows = json::array();
  for (const auto& r : plan.rows) {
    rows.push_back(
        {{"k", r.k}, {"per_step_level", r.per_step_level}, {"cumulative_level", r.cumulative_level}});
  }
  return {{"rows", std::move(rows)}, {"total_level", plan.total_level}};
}

}  // namespace

std::string circuit_stats_json(const CircuitStats& s) {
  json doc = stats_json(s);
  doc["schema_version"] = kSchemaVersion;
  return doc.dump(2);
}

std::string depth_plan_json(int n, int N, const SecretMarks& marks) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["n"] = n;
  doc["N"] = N;
  doc["repeated_squaring"] = plan_json(plan_depth(n, N, PowerStrategy::repeated_squaring, marks));
  doc["sequential"] = plan_json(plan_depth(n, N, PowerStrategy::sequential, marks));
  return doc.dump(2);
}

}  // namespace polypen
