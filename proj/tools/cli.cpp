#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dyadic/choquet.hpp"
#include "dyadic/decompositions.hpp"
#include "dyadic/equivalence.hpp"
#include "dyadic/experiments.hpp"
#include "dyadic/io.hpp"
#include "dyadic/maximal.hpp"

namespace dyadic::cli {
namespace {

using io::json;

constexpr const char* kDefaultConfig = R"({"dimension":1,"finest_level":-6})";

class Session {
 public:
  Session(std::istream& in, std::ostream& out) : in_(in), out_(out) {}

  // "-" reads stdin, a leading brace or bracket is inline JSON, anything
  // else names a file.
  json load(const std::string& arg) {
    std::string text;
    std::string source = arg;
    if (arg == "-") {
      text.assign(std::istreambuf_iterator<char>(in_), {});
      source = "<stdin>";
    } else if (const auto first = arg.find_first_not_of(" \t\r\n");
               first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) {
      text = arg;
      source = "<argument>";
    } else {
      std::ifstream file(arg, std::ios::binary);
      if (!file) throw io::InputError("cannot open " + arg);
      text.assign(std::istreambuf_iterator<char>(file), {});
    }
    return io::parse(text, source);
  }

  int emit(const json& j, bool pass) {
    out_ << j.dump() << '\n';
    return pass ? 0 : 1;
  }

 private:
  std::istream& in_;
  std::ostream& out_;
};

void write_csv(const std::string& path, const ExperimentReport& report) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw io::InputError("cannot write " + path);
  file << io::tails_csv(report);
}

std::vector<int> parse_levels(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw io::InputError("bad level list entry \"" + item + "\"");
    }
  }
  if (out.empty()) throw io::InputError("empty level list");
  return out;
}

struct Options {
  std::string gauge = R"({"kind":"power","beta":1})";
  std::string set = "-";
  std::string function;
  std::string region;
  std::string cube;
  std::string family;
  std::string capacity;
  std::string config;
  std::string csv;
  std::string op = "dyadic";
  std::string check;
  std::string experiment;
  std::string levels = "-3,-4,-5,-6,-7,-8";
  std::optional<double> p;
  double height = 0.0;
  double constant = 2.0;
  double a0 = 2.0;
  double lipschitz = 1.0;
  int samples = 200;
  int random = 20;
  int cubes = 100;
  std::uint64_t seed = 1;
  bool cover = false;
  bool ball = false;
  bool no_timing = false;
};

int run_content(Session& s, const Options& o) {
  const GridSet set = io::set_from_json(s.load(o.set));
  const SetFunction h = io::capacity_from_json(s.load(o.gauge), set.lattice());
  if (const CubeGauge* lambda = h.content_gauge()) {
    const ContentCover cover = content_cover(set, *lambda);
    json j = {{"content", io::number(cover.cost)}};
    if (o.cover) j = io::to_json(cover, cover.cost);
    return s.emit(j, true);
  }
  return s.emit({{"capacity", io::number(h(set))}}, true);
}

int run_integral(Session& s, const Options& o) {
  const GridFunction f = io::function_from_json(s.load(o.function.empty() ? "-" : o.function));
  const SetFunction h = io::capacity_from_json(s.load(o.gauge), f.lattice());
  std::optional<GridSet> region;
  if (!o.region.empty()) region = io::set_from_json(s.load(o.region), f.lattice());
  json j;
  j["integral"] = io::number(region ? choquet_integral(f, h, *region) : choquet_integral(f, h));
  if (o.p) j["lp_norm"] = io::number(region ? lp_norm(f, h, *region, *o.p) : lp_norm(f, h, *o.p));
  return s.emit(j, true);
}

int run_maximal(Session& s, const Options& o) {
  const GridFunction f = io::function_from_json(s.load(o.function.empty() ? "-" : o.function));
  const SetFunction h = io::capacity_from_json(s.load(o.gauge), f.lattice());
  const Lattice& lat = f.lattice();
  MaximalResult r{GridFunction(lat), {}};
  json extra = json::object();
  if (o.op == "dyadic") {
    r = dyadic_maximal(f, h);
  } else if (o.op == "ball") {
    r = ball_maximal(f, h, true);
  } else if (o.op == "ball-uncentered") {
    r = ball_maximal(f, h, false);
  } else if (o.op == "sharp") {
    const CubeId q0 = o.cube.empty() ? lat.root() : io::cube_from_json(s.load(o.cube));
    r = sharp_maximal(f, h, q0);
    extra["bmo"] = io::number(bmo_norm(f, h, q0));
  } else {
    throw io::InputError("unknown maximal operator \"" + o.op + "\"");
  }
  json j = io::to_json(r);
  j["op"] = o.op;
  j.update(extra);
  if (o.p) j["lp_norm"] = io::number(lp_norm(r.values, h, *o.p));
  return s.emit(j, true);
}

int run_cz(Session& s, const Options& o) {
  const GridFunction f = io::function_from_json(s.load(o.function.empty() ? "-" : o.function));
  const SetFunction h = io::capacity_from_json(s.load(o.gauge), f.lattice());
  const CubeId q = o.cube.empty() ? f.lattice().root() : io::cube_from_json(s.load(o.cube));
  const CZDecomposition cz = cz_decompose(f, q, o.height, h);
  const json j = io::to_json(cz);
  return s.emit(j, j["verdict"] == "pass");
}

int run_pack(Session& s, const Options& o) {
  const json fam = s.load(o.family.empty() ? "-" : o.family);
  if (!fam.is_object() || !fam.contains("config") || !fam.contains("cubes") || !fam["cubes"].is_array()) {
    throw io::InputError("family must be {\"config\": {...}, \"cubes\": [...]}");
  }
  const Lattice lat(io::config_from_json(fam["config"]));
  std::vector<CubeId> family;
  for (const auto& c : fam["cubes"]) family.push_back(io::cube_from_json(c));
  const SetFunction h = io::capacity_from_json(s.load(o.gauge), lat);
  const CubeGauge lambda = h.content_gauge() ? *h.content_gauge() : CubeGauge::from_field(lat, h.cube_values(), h.name());
  const PackingSelection sel = packing_select(family, lambda, o.constant);
  const PackingCheck check = verify_packing(sel, family, lambda);
  return s.emit(io::to_json(sel, check), check.pass());
}

int run_verify(Session& s, const Options& o) {
  if (o.capacity.empty()) throw io::InputError("verify needs --capacity");
  const json cap = s.load(o.capacity);
  const Lattice lat = o.config.empty() ? io::lattice_for(cap, Lattice(io::config_from_json(json::parse(kDefaultConfig))))
                                       : Lattice(io::config_from_json(s.load(o.config)));
  const SetFunction c = io::capacity_from_json(cap, lat);
  json j;
  bool pass = true;
  if (o.check == "equivalence") {
    const EquivalenceReport r = equivalence_check(c, o.samples, o.seed);
    j = io::to_json(r);
    pass = r.pass;
  } else if (o.check == "packing") {
    const PackingConditionReport r = packing_condition_test(c, o.samples, o.seed, o.a0);
    j = io::to_json(r);
    pass = r.pass;
  } else if (o.check == "doubling") {
    j = io::to_json(doubling_constants(c));
  } else {
    throw io::InputError("unknown check \"" + o.check + "\"");
  }
  j["capacity"] = c.name();
  j["config"] = io::to_json(lat.config());
  j["seed"] = o.seed;
  j["samples"] = o.samples;
  return s.emit(j, pass);
}

int run_experiment(Session& s, const Options& o) {
  const std::string& name = o.experiment;
  const json gauge = s.load(o.gauge);
  const char* fallback = name == "jn" ? R"({"dimension":1,"finest_level":-10})" : kDefaultConfig;
  std::optional<GridFunction> given;
  if (!o.function.empty()) given = io::function_from_json(s.load(o.function));
  const Lattice lat = !o.config.empty() ? Lattice(io::config_from_json(s.load(o.config)))
                      : given           ? given->lattice()
                                        : io::lattice_for(gauge, Lattice(io::config_from_json(json::parse(fallback))));
  auto battery = [&] {
    if (given) return std::vector<NamedFunction>{{"input", *given}};
    return function_battery(lat, o.seed, o.random);
  };

  ExperimentReport report;
  if (name == "weak") {
    report = weak_type_experiment(battery(), io::capacity_from_json(gauge, lat), o.ball);
  } else if (name == "strong") {
    report = strong_type_experiment(battery(), io::capacity_from_json(gauge, lat), o.p.value_or(2.0));
  } else if (name == "comparison") {
    report = maximal_comparison(battery(), io::capacity_from_json(gauge, lat));
  } else if (name == "jn") {
    const GridFunction f = given ? *given : leading_zero_bits_function(lat);
    const CubeId q0 = o.cube.empty() ? lat.root() : io::cube_from_json(s.load(o.cube));
    report = jn_experiment(f, io::capacity_from_json(gauge, lat), q0, o.cubes, o.seed);
  } else if (name == "differentiation") {
    const std::vector<int> levels = parse_levels(o.levels);
    report = differentiation_experiment([](const std::vector<double>& x) { return x.front(); }, o.lipschitz,
                                        lat.dimension(), levels,
                                        [&](const Lattice& l) { return io::capacity_from_json(gauge, l); }, gauge.dump());
  } else {
    throw io::InputError("unknown experiment \"" + name + "\"");
  }
  if (!o.csv.empty()) write_csv(o.csv, report);
  return s.emit(io::to_json(report, !o.no_timing), report.pass);
}

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dyadic Hausdorff contents, Choquet integrals and capacitary maximal operators"};
  app.require_subcommand(1);
  Options o;

  auto* content = app.add_subcommand("content", "Hausdorff content of a set");
  content->add_option("--gauge", o.gauge, "gauge or capacity JSON (inline or file)");
  content->add_option("--set", o.set, "set JSON file, '-' for stdin");
  content->add_flag("--cover", o.cover, "include the optimal cover");

  auto* integral = app.add_subcommand("integral", "Choquet integral of a nonnegative function");
  integral->add_option("--gauge", o.gauge, "gauge or capacity JSON");
  integral->add_option("--function", o.function, "function JSON file, '-' for stdin");
  integral->add_option("--region", o.region, "restrict to this set");
  integral->add_option("--p", o.p, "also report the L^p norm");

  auto* maximal = app.add_subcommand("maximal", "capacitary maximal functions");
  maximal->add_option("--op", o.op, "dyadic, ball, ball-uncentered or sharp")
      ->check(CLI::IsMember({"dyadic", "ball", "ball-uncentered", "sharp"}));
  maximal->add_option("--gauge", o.gauge, "gauge or capacity JSON");
  maximal->add_option("--function", o.function, "function JSON file, '-' for stdin");
  maximal->add_option("--q0", o.cube, "cube for the sharp operator (default root)");
  maximal->add_option("--p", o.p, "also report the L^p norm of the result");

  auto* cz = app.add_subcommand("cz", "Calderon-Zygmund stopping cubes");
  cz->add_option("--gauge", o.gauge, "gauge or capacity JSON");
  cz->add_option("--function", o.function, "function JSON file, '-' for stdin");
  cz->add_option("--cube", o.cube, "root cube (default window root)");
  cz->add_option("--height", o.height, "stopping height")->required();

  auto* pack = app.add_subcommand("pack", "greedy packing selection");
  pack->add_option("--gauge", o.gauge, "gauge or capacity JSON");
  pack->add_option("--family", o.family, "{\"config\":...,\"cubes\":[...]} file, '-' for stdin");
  pack->add_option("--constant", o.constant, "packing constant");

  auto* verify = app.add_subcommand("verify", "equivalence, packing condition or doubling constants of a capacity");
  verify->add_option("check", o.check, "equivalence, packing or doubling")
      ->required()
      ->check(CLI::IsMember({"equivalence", "packing", "doubling"}));
  verify->add_option("--capacity", o.capacity, "capacity JSON")->required();
  verify->add_option("--config", o.config, "lattice config JSON");
  verify->add_option("--samples", o.samples, "random samples or families");
  verify->add_option("--seed", o.seed, "seed");
  verify->add_option("--a0", o.a0, "packing-condition constant");

  auto* experiment = app.add_subcommand("experiment", "maximal-inequality, differentiation and John-Nirenberg experiments");
  experiment->add_option("name", o.experiment, "weak, strong, differentiation, jn or comparison")
      ->required()
      ->check(CLI::IsMember({"weak", "strong", "differentiation", "jn", "comparison"}));
  experiment->add_option("--gauge", o.gauge, "gauge or capacity JSON");
  experiment->add_option("--config", o.config, "lattice config JSON");
  experiment->add_option("--function", o.function, "use this function instead of the battery");
  experiment->add_option("--seed", o.seed, "seed");
  experiment->add_option("--random", o.random, "random functions per battery family");
  experiment->add_option("--p", o.p, "exponent for the strong-type experiment");
  experiment->add_option("--q0", o.cube, "top cube for jn (default root)");
  experiment->add_option("--cubes", o.cubes, "random deep cubes for jn");
  experiment->add_option("--levels", o.levels, "comma-separated finest levels for differentiation");
  experiment->add_option("--lipschitz", o.lipschitz, "Lipschitz constant of the sampled function");
  experiment->add_flag("--ball", o.ball, "also measure the centered ball operator");
  experiment->add_option("--csv", o.csv, "write the tail table here");
  experiment->add_flag("--no-timing", o.no_timing, "write runtime_ms as 0");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  Session session(in, out);
  try {
    if (content->parsed()) return run_content(session, o);
    if (integral->parsed()) return run_integral(session, o);
    if (maximal->parsed()) return run_maximal(session, o);
    if (cz->parsed()) return run_cz(session, o);
    if (pack->parsed()) return run_pack(session, o);
    if (verify->parsed()) return run_verify(session, o);
    if (experiment->parsed()) return run_experiment(session, o);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace dyadic::cli
