#pragma once

#include <json.hpp>
#include <string>

#include "specdisc/continuous.hpp"
#include "specdisc/criteria.hpp"
#include "specdisc/duality.hpp"
#include "specdisc/model.hpp"
#include "specdisc/single_birth.hpp"

namespace specdisc {

using json = nlohmann::json;

/// Reads and parses a JSON file; InputError on I/O or syntax problems.
json read_json_file(const std::string& path);

/// A rate sequence from an expression string, a number, an array (table
/// without extension) or {"table": [...], "formula": "..."}.
RateSequence rate_from_json(const json& j, const std::string& field);

/// {"kind": "discrete", "a", "b", "c", optional "mu" instead of "a",
/// "overrides": {"a": {"1": 1.0}}, "name"}.
DiscreteModel discrete_model_from_json(const json& j);

/// Rows 0..size-1 of the tridiagonal part plus the "q_low" list [[i, j, q], ...].
LowerTriModel lower_tri_from_json(const json& j, std::size_t size);

/// {"kind": "continuous", "a", "b", "c" (expressions in x), "domain", "theta", "name"}.
DiffusionModel diffusion_model_from_json(const json& j);

/// Formula sequences are written as text, anything else as a table of the
/// first table_size entries.
json rate_to_json(const RateSequence& s, std::size_t table_size);
json model_to_json(const DiscreteModel& m, std::size_t table_size);

json to_json(const LineFit& f);
json to_json(const SeriesCertificate& c);
json to_json(const PartReport& p);
json to_json(const CriterionReport& r);
json to_json(const SufficientReport& r);
json to_json(const ContinuousReport& r);
json to_json(const DualityReport& r);
json to_json(const SimilarityReport& r);

}  // namespace specdisc
