#include "pgcl/json_report.hpp"

#include "pgcl/printer.hpp"

namespace pgcl {

using nlohmann::json;

json natural_json(const Natural& n) {
  if (fits_u64(n)) return to_u64(n);
  return n.get_str();
}

json to_json(const Valuation& env, const std::vector<Var>& always_listed) {
  json out = json::object();
  for (const auto& v : always_listed) out[v] = to_string(env.get(v));
  for (const auto& [name, value] : env.entries()) out[name] = to_string(value);
  return out;
}

json to_json(const State& s, const std::vector<Var>& always_listed) {
  return {
      {"terminated", s.terminated()},
      {"control", pretty_print(s.control)},
      {"env", to_json(s.env, always_listed)},
      {"prob", to_string(s.prob)},
      {"trace", s.trace.str()},
  };
}

json to_json(const Budget& b) {
  if (const auto* sb = std::get_if<SumBounds>(&b)) {
    return {{"y1", sb->y1}, {"y2", sb->y2}};
  }
  return {{"nodes", std::get<NodeBudget>(b).nodes}};
}

json to_json(const BoundReport& r) {
  json expectation = json::object();
  for (const auto& [v, value] : r.expectation_mass) expectation[v] = to_string(value);
  const Coverage& c = r.budget_used;
  json used = {
      {"nodes_expanded", c.nodes_expanded},
      {"complete_depth", c.complete_depth ? json(*c.complete_depth) : json(nullptr)},
      {"exhausted", c.exhausted},
      {"max_trace_index", natural_json(c.max_trace_index)},
      {"max_terminal_depth", c.max_terminal_depth},
  };
  if (c.matched) used["matched"] = {{"y1", natural_json(c.matched->y1)}, {"y2", c.matched->y2}};
  else used["matched"] = nullptr;
  return {
      {"terminated_mass", to_string(r.terminated_mass)},
      {"live_mass", to_string(r.live_mass)},
      {"divergent_mass", to_string(r.divergent_mass)},
      {"expectation_mass", expectation},
      {"budget_used", used},
  };
}

json to_json(const LexpVerdict& v) {
  if (const auto* w = std::get_if<LexpWitness>(&v)) {
    return {
        {"verdict", "witness"},
        {"witness", {{"y1", natural_json(w->y1)}, {"y2", w->y2}}},
        {"sum", to_string(w->partial_sum)},
    };
  }
  const auto& u = std::get<LexpUnknown>(v);
  return {{"verdict", "unknown"}, {"budget", to_json(u.exhausted)}, {"best_sum", to_string(u.best_sum)}};
}

json to_json(const UexpVerdict& v) {
  if (const auto* r = std::get_if<UexpRefuted>(&v)) {
    return {
        {"verdict", "refuted"},
        {"witness", {{"y1", natural_json(r->y1)}, {"y2", r->y2}}},
        {"sum", to_string(r->partial_sum)},
    };
  }
  const auto& n = std::get<UexpNotRefuted>(v);
  return {{"verdict", "not_refuted"}, {"budget", to_json(n.exhausted)}, {"best_sum", to_string(n.best_sum)}};
}

json to_json(const Estimate& e) {
  return {
      {"mean", e.mean},
      {"ci_halfwidth", e.ci_halfwidth},
      {"timeout_fraction", e.timeout_fraction},
      {"n", e.n},
      {"rng", std::string(kRngAlgorithm)},
  };
}

json to_json(const ReductionOutput& r) {
  return {
      {"program", pretty_print(r.program)},
      {"var", r.target_var ? json(*r.target_var) : json(nullptr)},
      {"value", r.target_value ? json(to_string(*r.target_value)) : json(nullptr)},
      {"kind", to_string(r.kind)},
      {"source_hash", r.source_hash},
  };
}

}  // namespace pgcl
