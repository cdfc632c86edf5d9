#pragma once

// JSON encodings of analysis results. Exact quantities are "num/den"
// strings; only sampler statistics are JSON numbers.

#include <json.hpp>

#include "pgcl/explorer.hpp"
#include "pgcl/reductions.hpp"
#include "pgcl/sampler.hpp"

namespace pgcl {

inline constexpr std::string_view kSchemaVersion = "1";

/// Number when it fits in 64 bits, decimal string otherwise.
nlohmann::json natural_json(const Natural& n);

nlohmann::json to_json(const Valuation& env, const std::vector<Var>& always_listed = {});
nlohmann::json to_json(const State& s, const std::vector<Var>& always_listed = {});
nlohmann::json to_json(const Budget& b);
nlohmann::json to_json(const BoundReport& r);
nlohmann::json to_json(const LexpVerdict& v);
nlohmann::json to_json(const UexpVerdict& v);
nlohmann::json to_json(const Estimate& e);
nlohmann::json to_json(const ReductionOutput& r);

}  // namespace pgcl
