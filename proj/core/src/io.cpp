#include "dyadic/io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "dyadic/extended.hpp"

namespace dyadic::io {
namespace {

[[noreturn]] void fail(std::string_view what) { throw InputError(std::string(what)); }

const json& member(const json& j, const char* key, std::string_view what) {
  if (!j.is_object()) fail(std::string(what) + " must be an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(std::string(what) + " is missing \"" + key + "\"");
  return *it;
}

std::int64_t get_int(const json& j, std::string_view what) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (std::floor(v) == v && std::fabs(v) < 9.0e15) return static_cast<std::int64_t>(v);
  }
  fail(std::string(what) + " must be an integer");
}

double get_real(const json& j, const char* key, std::string_view what) {
  return get_number(member(j, key, what), std::string(what) + "." + key);
}

std::string kind_of(const json& j) {
  const json& k = member(j, "kind", "capacity");
  if (!k.is_string()) fail("capacity kind must be a string");
  return k.get<std::string>();
}

json cubes_json(const std::vector<CubeId>& cubes) {
  json out = json::array();
  for (const auto& c : cubes) out.push_back(to_json(c));
  return out;
}

json ball_json(const Ball& b) {
  json center = json::array();
  for (double x : b.center) center.push_back(number(x));
  return {{"center", center}, {"radius", number(b.radius)}};
}

}  // namespace

json parse(std::string_view text, std::string_view source) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string msg = e.what();
    if (const auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
    fail(std::string(source) + ": line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg);
  }
}

json number(double v) {
  if (std::isnan(v)) throw std::invalid_argument("NaN cannot be serialized");
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::floor(v) == v && std::fabs(v) < 9.0e15) return static_cast<std::int64_t>(v);
  return v;
}

double get_number(const json& j, std::string_view what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf" || s == "+inf" || s == "infinity") return kInfinity;
    if (s == "-inf") return -kInfinity;
  }
  fail(std::string(what) + " must be a number or \"inf\"");
}

LatticeConfig config_from_json(const json& j) {
  LatticeConfig c;
  c.dimension = static_cast<int>(get_int(member(j, "dimension", "config"), "config.dimension"));
  c.finest_level = static_cast<int>(get_int(member(j, "finest_level", "config"), "config.finest_level"));
  if (const auto it = j.find("root_level"); it != j.end() && get_int(*it, "config.root_level") != 0) {
    fail("config.root_level must be 0");
  }
  if (const auto it = j.find("anchor"); it != j.end()) {
    if (!it->is_array()) fail("config.anchor must be an array");
    for (const auto& a : *it) c.anchor.push_back(get_int(a, "config.anchor entry"));
  }
  return c;
}

json to_json(const LatticeConfig& config) {
  json j = {{"dimension", config.dimension}, {"finest_level", config.finest_level}};
  if (!config.anchor.empty()) j["anchor"] = config.anchor;
  return j;
}

CubeId cube_from_json(const json& j) {
  CubeId c;
  c.level = static_cast<int>(get_int(member(j, "level", "cube"), "cube.level"));
  const json& idx = member(j, "index", "cube");
  if (idx.is_array()) {
    for (const auto& i : idx) c.index.push_back(get_int(i, "cube.index entry"));
  } else {
    c.index.push_back(get_int(idx, "cube.index"));
  }
  return c;
}

json to_json(const CubeId& cube) { return {{"level", cube.level}, {"index", cube.index}}; }

GridSet set_from_json(const json& j) { return set_from_json(j, Lattice(config_from_json(member(j, "config", "set")))); }

GridSet set_from_json(const json& j, const Lattice& lattice) {
  if (const auto it = j.find("config"); it != j.end() && config_from_json(*it) != lattice.config()) {
    fail("set config does not match the lattice");
  }
  const json& cells = member(j, "cells", "set");
  if (!cells.is_array()) fail("set.cells must be an array");
  GridSet s(lattice);
  for (const auto& c : cells) {
    std::int64_t linear = 0;
    if (c.is_array()) {
      std::vector<std::int64_t> idx;
      for (const auto& i : c) idx.push_back(get_int(i, "cell index entry"));
      if (static_cast<int>(idx.size()) != lattice.dimension()) fail("cell index has the wrong length");
      const std::int64_t side = std::int64_t{1} << lattice.depth();
      for (auto i : idx) {
        if (i < 0 || i >= side) fail("cell index outside the window");
      }
      linear = lattice.linear_index(idx);
    } else {
      linear = get_int(c, "cell");
    }
    if (linear < 0 || linear >= lattice.cell_count()) fail("cell " + std::to_string(linear) + " outside the window");
    s.insert(linear);
  }
  return s;
}

json to_json(const GridSet& set) { return {{"config", to_json(set.lattice().config())}, {"cells", set.cells()}}; }

GridFunction function_from_json(const json& j) {
  return function_from_json(j, Lattice(config_from_json(member(j, "config", "function"))));
}

GridFunction function_from_json(const json& j, const Lattice& lattice) {
  if (const auto it = j.find("config"); it != j.end() && config_from_json(*it) != lattice.config()) {
    fail("function config does not match the lattice");
  }
  const json& values = member(j, "values", "function");
  if (!values.is_array()) fail("function.values must be an array");
  if (static_cast<std::int64_t>(values.size()) != lattice.cell_count()) {
    fail("function.values has " + std::to_string(values.size()) + " entries, expected " +
         std::to_string(lattice.cell_count()));
  }
  std::vector<double> v;
  v.reserve(values.size());
  for (const auto& x : values) v.push_back(get_number(x, "function value"));
  return GridFunction::from_linear(lattice, v);
}

json to_json(const GridFunction& f) {
  json values = json::array();
  for (double v : f.linear_values()) values.push_back(number(v));
  return {{"config", to_json(f.lattice().config())}, {"values", values}};
}

Gauge gauge_from_json(const json& j) {
  const std::string kind = kind_of(j);
  if (kind == "power") return Gauge::power(get_real(j, "beta", "gauge"));
  if (kind == "log") return Gauge::log(get_real(j, "beta", "gauge"));
  if (kind == "table") {
    std::map<int, double> table;
    for (const auto& e : member(j, "entries", "gauge")) {
      if (e.contains("index")) fail("gauge table entries take a level, not a cube");
      const int level = static_cast<int>(get_int(member(e, "level", "table entry"), "table entry level"));
      if (!table.emplace(level, get_real(e, "value", "table entry")).second) {
        fail("duplicate gauge table level " + std::to_string(level));
      }
    }
    return Gauge::table(std::move(table));
  }
  fail("unknown gauge kind \"" + kind + "\"");
}

Lattice lattice_for(const json& j, const Lattice& fallback) {
  if (j.is_object()) {
    if (const auto it = j.find("config"); it != j.end()) return Lattice(config_from_json(*it));
  }
  return fallback;
}

SetFunction capacity_from_json(const json& j, const Lattice& lattice) {
  if (const auto it = j.find("config"); it != j.end() && config_from_json(*it) != lattice.config()) {
    fail("capacity config does not match the lattice");
  }
  const std::string kind = kind_of(j);
  if (kind == "measure_power") {
    const double alpha = get_real(j, "alpha", "capacity");
    const auto it = j.find("density");
    if (it == j.end() || (it->is_string() && it->get<std::string>() == "uniform")) {
      return uniform_measure_power_capacity(lattice, alpha);
    }
    if (!it->is_array()) fail("capacity.density must be \"uniform\" or an array");
    return measure_power_capacity(function_from_json(json{{"values", *it}}, lattice), alpha);
  }
  if (kind == "table") {
    const json& entries = member(j, "entries", "capacity");
    if (!entries.is_array()) fail("capacity.entries must be an array");
    const bool by_cube = !entries.empty() && entries.front().contains("index");
    if (!by_cube) return make_content(lattice, gauge_from_json(j));
    std::vector<std::pair<CubeId, double>> cubes;
    for (const auto& e : entries) {
      if (!e.contains("index")) fail("capacity table mixes cube and level entries");
      cubes.emplace_back(cube_from_json(e), get_real(e, "value", "table entry"));
    }
    return ContentHandle(CubeGauge::table(lattice, cubes));
  }
  return make_content(lattice, gauge_from_json(j));
}

json to_json(const ContentCover& cover, double value) {
  return {{"content", number(value)}, {"cover", cubes_json(cover.cubes)}};
}

json to_json(const MaximalResult& result) {
  json witness = json::array();
  for (const auto& w : result.witness) {
    if (const auto* c = std::get_if<CubeId>(&w)) {
      witness.push_back({{"cube", to_json(*c)}});
    } else if (const auto* b = std::get_if<Ball>(&w)) {
      witness.push_back({{"ball", ball_json(*b)}});
    } else {
      witness.push_back(nullptr);
    }
  }
  json values = json::array();
  for (double v : result.values.linear_values()) values.push_back(number(v));
  return {{"values", values}, {"witness", witness}};
}

json to_json(const PackingSelection& selection, const PackingCheck& check) {
  json provenance = json::array();
  for (const auto& p : selection.provenance) {
    provenance.push_back(
        {{"dropped", to_json(p.dropped)}, {"witness", to_json(p.witness)}, {"absorbed_by", to_json(p.absorbed_by)}});
  }
  return {{"constant", number(selection.constant)},
          {"selected", cubes_json(selection.selected)},
          {"ancestors", cubes_json(selection.ancestors)},
          {"pruned", cubes_json(selection.pruned)},
          {"provenance", provenance},
          {"certificate",
           {{"covers", check.covers},
            {"sums_bounded", check.sums_bounded},
            {"ancestors_paid", check.ancestors_paid},
            {"ancestors_disjoint", check.ancestors_disjoint},
            {"cubes_checked", check.cubes_checked},
            {"detail", check.detail}}},
          {"verdict", check.pass() ? "pass" : "fail"}};
}

json to_json(const CZDecomposition& cz) {
  json cubes = json::array();
  for (std::size_t i = 0; i < cz.cubes.size(); ++i) {
    cubes.push_back({{"cube", to_json(cz.cubes[i])},
                     {"average", number(cz.averages[i])},
                     {"parent_average", number(cz.parent_averages[i])}});
  }
  std::string reason;
  const bool ok = cz_certificate_holds(cz, &reason);
  json out = {{"root", to_json(cz.root)},
              {"height", number(cz.height)},
              {"root_average", number(cz.root_average)},
              {"M0", number(cz.upper_factor)},
              {"cubes", cubes},
              {"residual_cells", cz.residual_violations},
              {"residual_content", number(cz.residual_content)},
              {"verdict", ok ? "pass" : "fail"}};
  if (!ok) out["reason"] = reason;
  return out;
}

json to_json(const EquivalenceReport& report) {
  json samples = json::array();
  for (const auto& s : report.samples) {
    samples.push_back({{"label", s.label},
                       {"cells", s.cells},
                       {"capacity", number(s.capacity)},
                       {"induced", number(s.induced)},
                       {"ratio", number(s.ratio)}});
  }
  json out = {{"check", "equivalence"},
              {"min_ratio", number(report.min_ratio)},
              {"max_ratio", number(report.max_ratio)},
              {"tolerance", number(report.tolerance)},
              {"skipped", report.skipped},
              {"samples", samples},
              {"verdict", report.pass ? "pass" : "fail"}};
  if (report.worst) {
    out["witness"] = {{"label", report.worst->label},
                      {"ratio", number(report.worst->ratio)},
                      {"capacity", number(report.worst->capacity)},
                      {"induced", number(report.worst->induced)},
                      {"cells", report.worst_set->cells()}};
  }
  return out;
}

json to_json(const PackingConditionReport& report) {
  return {{"check", "packing"},
          {"a0", number(report.a0)},
          {"families", report.families},
          {"functions", report.functions},
          {"worst_ratio", number(report.worst_ratio)},
          {"witness",
           {{"family", cubes_json(report.witness_family)},
            {"function", report.witness_function},
            {"lhs", number(report.witness_lhs)},
            {"rhs", number(report.witness_rhs)}}},
          {"verdict", report.pass ? "pass" : "fail"}};
}

json to_json(const DoublingReport& report) {
  json center = json::array();
  for (double x : report.ball_center) center.push_back(number(x));
  return {{"check", "doubling"},
          {"dyadic", number(report.dyadic)},
          {"dyadic_witness", {{"parent", to_json(report.dyadic_parent)}, {"child", to_json(report.dyadic_child)}}},
          {"ball", number(report.ball)},
          {"ball_witness", {{"center", center}, {"radius", number(report.ball_radius)}}},
          {"ball_pairs", report.ball_pairs},
          {"geometric_radii", report.geometric_radii},
          {"verdict", "pass"}};
}

json to_json(const ExperimentReport& report, bool timing) {
  json constants = json::object();
  for (const auto& [k, v] : report.constants) constants[k] = number(v);
  json measurements = json::array();
  for (const auto& m : report.measurements) {
    json e = {{"quantity", m.quantity}, {"value", number(m.value)}};
    if (m.bound) {
      e["bound"] = number(*m.bound);
      e["relation"] = m.relation;
    }
    e["pass"] = m.pass;
    if (!m.context.empty()) e["context"] = m.context;
    measurements.push_back(std::move(e));
  }
  return {{"experiment", report.name},
          {"inputs_digest", report.inputs_digest},
          {"constants", constants},
          {"measurements", measurements},
          {"verdict", report.pass ? "pass" : "fail"},
          {"runtime_ms", timing ? number(std::round(report.runtime_ms)) : json(0)}};
}

std::string tails_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "Qprime_id,t,tail,bound\n";
  char buf[128];
  for (const auto& row : report.tails) {
    std::snprintf(buf, sizeof buf, ",%.17g,%.17g,%.17g\n", row.t, row.tail, row.bound);
    out << '"' << row.cube << '"' << buf;
  }
  return out.str();
}

}  // namespace dyadic::io
