#include <gtest/gtest.h>

#include <cmath>

#include "dyadic/choquet.hpp"
#include "dyadic/experiments.hpp"

namespace dyadic {
namespace {

const Measurement& find(const ExperimentReport& r, const std::string& quantity) {
  for (const auto& m : r.measurements) {
    if (m.quantity == quantity) return m;
  }
  throw std::runtime_error("no measurement " + quantity);
}

TEST(WeakTypeTest, SpikeRatio) {
  const Lattice l(1, -2);
  const ContentHandle h = make_content(l, Gauge::power(1.0));
  EXPECT_EQ(weak_type_ratio(spike_function(l), h, 1.5), 0.75);
  const ExperimentReport r = weak_type_experiment({{"spike", spike_function(l)}}, h);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(find(r, "max dyadic weak-type ratio").value, 1.0);
}

TEST(WeakTypeTest, ConstantsStayBelowOne) {
  const Lattice l(2, -3);
  const ContentHandle h = make_content(l, Gauge::power(0.5));
  const ExperimentReport r = weak_type_experiment({{"c", GridFunction(l, 2.0)}}, h, true);
  EXPECT_TRUE(r.pass);
  EXPECT_LE(find(r, "max dyadic weak-type ratio").value, 1.0 + 1e-12);
}

TEST(WeakTypeTest, BatteryWithinTwo) {
  const Lattice l(1, -6);
  for (const Gauge& g : {Gauge::power(1.0), Gauge::power(0.5), Gauge::log(1.0)}) {
    const ExperimentReport r = weak_type_experiment(function_battery(l, 3, 10), make_content(l, g));
    EXPECT_TRUE(r.pass) << g.name();
    EXPECT_LE(find(r, "max dyadic weak-type ratio").value, 2.0 + 1e-9);
  }
}

TEST(StrongTypeTest, SpikeAndHomogeneity) {
  const Lattice l(1, -2);
  const ContentHandle h = make_content(l, Gauge::power(1.0));
  const GridFunction f = spike_function(l);
  const ExperimentReport r = strong_type_experiment({{"spike", f}, {"3 spike", f.scaled(3.0)}}, h, 2.0);
  EXPECT_EQ(r.constants.at("cap"), 64.0);
  EXPECT_EQ(find(r, "strong-type ratio: spike").value, 1.375);
  EXPECT_NEAR(find(r, "strong-type ratio: 3 spike").value, 1.375, 1e-12);
  const ExperimentReport c = strong_type_experiment({{"c", GridFunction(l, 5.0)}}, h, 3.0);
  EXPECT_NEAR(find(c, "strong-type ratio: c").value, 1.0, 1e-12);
  EXPECT_THROW(strong_type_experiment({}, h, 1.0), std::invalid_argument);
}

TEST(DifferentiationTest, IdentityHalvesEachLevel) {
  const auto make_h = [](const Lattice& l) -> SetFunction { return make_content(l, Gauge::power(1.0)); };
  const ExperimentReport r = differentiation_experiment([](const std::vector<double>& x) { return x[0]; }, 1.0, 1,
                                                         {-3, -4, -5, -6}, make_h, "x");
  EXPECT_TRUE(r.pass);
  int level = -3;
  for (const auto& m : r.measurements) {
    if (m.quantity != "tower deviation") continue;
    EXPECT_DOUBLE_EQ(m.value, std::ldexp(1.0, level - 1));
    --level;
  }
  EXPECT_LE(find(r, "final tower deviation").value, std::ldexp(1.0, -6));
}

TEST(DifferentiationTest, ConstantFunction) {
  const auto make_h = [](const Lattice& l) -> SetFunction { return make_content(l, Gauge::power(0.5)); };
  const ExperimentReport r =
      differentiation_experiment([](const std::vector<double>&) { return 3.0; }, 0.0, 2, {-1, -2, -3}, make_h, "c");
  EXPECT_TRUE(r.pass);
  for (const auto& m : r.measurements) EXPECT_EQ(m.value, 0.0);
}

TEST(JNTest, ConstantIsTrivial) {
  const Lattice l(1, -4);
  const ExperimentReport r = jn_experiment(GridFunction(l, 1.0), make_content(l, Gauge::power(1.0)), l.root());
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.constants.at("bmo"), 0.0);
  EXPECT_TRUE(r.tails.empty());
}

TEST(JNTest, LeadingZeroBits) {
  const Lattice l(1, -8);
  const GridFunction f = leading_zero_bits_function(l);
  EXPECT_EQ(f.at(0), 8.0);
  EXPECT_EQ(f.at(1), 7.0);
  EXPECT_EQ(f.at(255), 0.0);
  const ExperimentReport r = jn_experiment(f, make_content(l, Gauge::power(1.0)), l.root(), 30, 2);
  EXPECT_TRUE(r.pass);
  EXPECT_GE(find(r, "min tail-bound slack").value, 0.0);
  EXPECT_FALSE(r.tails.empty());
  for (const auto& row : r.tails) {
    // Below c' ||f||_BMO the bound already exceeds H(Q').
    if (row.t == 0.0) EXPECT_GE(row.bound, row.tail);
  }
  EXPECT_EQ(r.constants.at("cprime"), 2.0 + 2.0 * r.constants.at("M0"));
}

TEST(ComparisonTest, BatteryPasses) {
  const Lattice l(1, -4);
  const ExperimentReport r = maximal_comparison(function_battery(l, 5, 4), make_content(l, Gauge::power(0.5)));
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.constants.at("C"), 3.0);
  EXPECT_GT(r.constants.at("c"), 0.0);
}

TEST(DigestTest, Fnv1a) {
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
  const Lattice l(1, -3);
  EXPECT_EQ(digest_of(GridFunction(l, 1.0)), digest_of(GridFunction(l, 1.0)));
  EXPECT_NE(digest_of(GridFunction(l, 1.0)), digest_of(GridFunction(l, 2.0)));
}

TEST(BatteryTest, DeterministicForASeed) {
  const Lattice l(2, -3);
  const auto a = function_battery(l, 9, 3);
  const auto b = function_battery(l, 9, 3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].name, b[i].name);
    EXPECT_EQ(a[i].f.linear_values(), b[i].f.linear_values());
  }
}

}  // namespace
}  // namespace dyadic
