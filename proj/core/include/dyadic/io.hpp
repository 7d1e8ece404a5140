#pragma once

// JSON and CSV conversion for configurations, sets, functions, capacities
// and reports. Infinite values travel as the string "inf"; integral values
// are written without a fractional part.

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dyadic/choquet.hpp"
#include "dyadic/decompositions.hpp"
#include "dyadic/equivalence.hpp"
#include "dyadic/experiments.hpp"
#include "dyadic/grid.hpp"
#include "dyadic/lattice.hpp"
#include "dyadic/maximal.hpp"
#include "dyadic/set_functions.hpp"

namespace dyadic::io {

using nlohmann::json;

// Malformed or ill-typed input. what() carries the source and, for syntax
// errors, "line L, column C".
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json parse(std::string_view text, std::string_view source);

json number(double v);
double get_number(const json& j, std::string_view what);

LatticeConfig config_from_json(const json& j);
json to_json(const LatticeConfig& config);

// {"level": k, "index": [...]}.
CubeId cube_from_json(const json& j);
json to_json(const CubeId& cube);

// {"config": {...}, "cells": [...]}; cells are linear indices or index vectors.
GridSet set_from_json(const json& j);
GridSet set_from_json(const json& j, const Lattice& lattice);
json to_json(const GridSet& set);

// {"config": {...}, "values": [...]} in linear order.
GridFunction function_from_json(const json& j);
GridFunction function_from_json(const json& j, const Lattice& lattice);
json to_json(const GridFunction& f);

// power / log gauges, and level-only tables {"kind":"table","entries":[{"level":k,"value":v}]}.
Gauge gauge_from_json(const json& j);

// Contents for power, log and table kinds; measure_power yields the
// measure-power capacity. A "config" member, when present, must match.
SetFunction capacity_from_json(const json& j, const Lattice& lattice);
// Lattice from the "config" member of j, or the fallback.
Lattice lattice_for(const json& j, const Lattice& fallback);

json to_json(const ContentCover& cover, double value);
json to_json(const MaximalResult& result);
json to_json(const PackingSelection& selection, const PackingCheck& check);
json to_json(const CZDecomposition& cz);
json to_json(const EquivalenceReport& report);
json to_json(const PackingConditionReport& report);
json to_json(const DoublingReport& report);
json to_json(const ExperimentReport& report, bool timing = true);

// Header Qprime_id,t,tail,bound.
std::string tails_csv(const ExperimentReport& report);

}  // namespace dyadic::io
