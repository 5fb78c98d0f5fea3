#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "ipp/field.hpp"
#include "ipp/fleet_local.hpp"

using namespace ipp;

namespace {

struct Setup {
  GridGraph g;
  ScalarField field;
  GpBasedEnv env;

  Setup(const std::string& ascii, std::uint64_t seed = 1, double noise = 0.0)
      : g(test::make_grid(ascii)),
        field([&] {
          FieldSpec spec;
          spec.seed = seed;
          return generate_field(g, spec);
        }()),
        env(g, field, {}, noise, seed) {}

  FleetConfig config(std::vector<NodeId> starts, double budget) const {
    FleetConfig c;
    c.n_vehicles = static_cast<int>(starts.size());
    c.initial_positions = std::move(starts);
    c.max_distance.assign(c.n_vehicles, budget);
    return c;
  }
};

}  // namespace

TEST_CASE("move to current position reaches immediately without travel") {
  Setup s("11111\n");
  LocalFleet fleet(s.g, s.env, s.config({2}, 100.0));
  const auto res = fleet.move({2});
  CHECK(res.reached[0]);
  CHECK_FALSE(res.done[0]);
  CHECK(fleet.states()[0].traveled == 0.0);
}

TEST_CASE("1x5 strip: far end reached after 4 move calls, 20 m traveled") {
  Setup s("11111\n");
  LocalFleet fleet(s.g, s.env, s.config({0}, 100.0));
  int calls = 0;
  while (!fleet.move({4}).reached[0]) ++calls;
  CHECK(calls == 3);  // 4th call returns reached
  CHECK(fleet.states()[0].position == 4);
  CHECK(fleet.states()[0].traveled == doctest::Approx(20.0));
  CHECK(fleet.visit_log().size() == 4);
}

TEST_CASE("budget 7 m on 5 m cells: one hop then done short of the target") {
  Setup s("11111\n");
  LocalFleet fleet(s.g, s.env, s.config({0}, 7.0));
  auto res = fleet.move({2});
  CHECK_FALSE(res.reached[0]);
  CHECK_FALSE(res.done[0]);
  CHECK(fleet.states()[0].traveled == doctest::Approx(5.0));
  res = fleet.move({2});
  CHECK_FALSE(res.reached[0]);
  CHECK(res.done[0]);
  CHECK(fleet.states()[0].position == 1);
  CHECK(fleet.states()[0].traveled == doctest::Approx(5.0));
  CHECK(res.all_settled());
}

TEST_CASE("unreachable target marks the vehicle done with a fault") {
  Setup s("101\n000\n101\n");
  LocalFleet fleet(s.g, s.env, s.config({0}, 100.0));
  const auto res = fleet.move({1});
  CHECK(res.done[0]);
  CHECK(fleet.states()[0].fault);
}

TEST_CASE("take_measurement: one reading per hop, noise-free values match truth") {
  Setup s("11111\n");
  LocalFleet fleet(s.g, s.env, s.config({0}, 100.0));
  while (!fleet.move({3}).reached[0]) {
  }
  const auto ms = fleet.take_measurement();
  REQUIRE(ms.size() == 3);  // hops to 1, 2, 3
  for (std::size_t i = 0; i < ms.size(); ++i) {
    CHECK(ms[i].node == static_cast<NodeId>(i + 1));
    CHECK(ms[i].value == s.field.values[ms[i].node]);
  }
}

TEST_CASE("stationary vehicle takes a rest measurement; two on one node agree") {
  Setup s("111\n");
  LocalFleet fleet(s.g, s.env, s.config({1, 1}, 100.0));
  fleet.move({1, 1});
  const auto ms = fleet.take_measurement();
  REQUIRE(ms.size() == 2);
  CHECK(ms[0].vehicle == 0);
  CHECK(ms[1].vehicle == 1);
  CHECK(ms[0].node == 1);
  CHECK(ms[1].node == 1);
  CHECK(ms[0].value == ms[1].value);  // noise 0
}

TEST_CASE("budget-exhausted vehicle still measures at its resting node") {
  Setup s("11111\n");
  LocalFleet fleet(s.g, s.env, s.config({0}, 0.0));
  const auto res = fleet.move({4});
  CHECK(res.done[0]);
  const auto ms = fleet.take_measurement();
  REQUIRE(ms.size() == 1);
  CHECK(ms[0].node == 0);
}

TEST_CASE("faulted vehicle reports no measurement") {
  Setup s("101\n000\n101\n");
  LocalFleet fleet(s.g, s.env, s.config({0}, 100.0));
  fleet.move({1});
  CHECK(fleet.take_measurement().empty());
}

TEST_CASE("measurements are returned in vehicle-index order") {
  Setup s(test::full_grid_ascii(3, 3));
  LocalFleet fleet(s.g, s.env, s.config({8, 0}, 100.0));
  while (!fleet.move({0, 8}).all_settled()) {
  }
  const auto ms = fleet.take_measurement();
  REQUIRE(ms.size() >= 4);
  for (std::size_t i = 1; i < ms.size(); ++i) CHECK(ms[i - 1].vehicle <= ms[i].vehicle);
}

TEST_CASE("distance accounting equals the sum over the hop log") {
  Setup s(test::full_grid_ascii(5, 6), 3);
  LocalFleet fleet(s.g, s.env, s.config({0}, 80.0));
  Rng rng(5);
  for (int step = 0; step < 10; ++step) {
    const NodeId target = static_cast<NodeId>(rng.uniform_index(s.g.node_count()));
    for (int k = 0; k < 64; ++k) {
      const auto res = fleet.move({target});
      if (res.reached[0] || res.done[0]) break;
    }
  }
  double total = 0.0;
  NodeId prev = 0;
  for (const auto& hop : fleet.visit_log()) {
    double edge = 0.0;
    for (const auto& e : s.g.edges(prev))
      if (e.to == hop.node) edge = e.length;
    REQUIRE(edge > 0.0);  // consecutive positions always graph-adjacent
    total += edge;
    prev = hop.node;
  }
  CHECK(fleet.states()[0].traveled == doctest::Approx(total).epsilon(1e-12));
  CHECK(fleet.states()[0].traveled <= 80.0);
}

TEST_CASE("reset restores a fresh fleet and accepts new positions") {
  Setup s("11111\n");
  LocalFleet fleet(s.g, s.env, s.config({0}, 50.0));
  while (!fleet.move({4}).reached[0]) {
  }
  fleet.take_measurement();
  auto cfg = s.config({2}, 30.0);
  fleet.reset(cfg);
  CHECK(fleet.states()[0].position == 2);
  CHECK(fleet.states()[0].traveled == 0.0);
  CHECK_FALSE(fleet.states()[0].done);
  CHECK(fleet.visit_log().empty());
  fleet.reset(cfg);  // idempotent
  CHECK(fleet.states()[0].position == 2);
}

TEST_CASE("config validation rejects bad input") {
  Setup s("11\n");
  FleetConfig bad;
  bad.n_vehicles = 0;
  CHECK_THROWS(bad.validate(s.g));
  bad = s.config({0}, -1.0);
  CHECK_THROWS(bad.validate(s.g));
  bad = s.config({99}, 1.0);
  CHECK_THROWS(bad.validate(s.g));
  auto fleet = LocalFleet(s.g, s.env, s.config({0}, 1.0));
  CHECK_THROWS(fleet.move({0, 1}));   // size mismatch
  CHECK_THROWS(fleet.move({-1}));     // invalid target
}

TEST_CASE("sim_time is zero at the instantaneous level") {
  Setup s("111\n");
  LocalFleet fleet(s.g, s.env, s.config({0}, 100.0));
  fleet.move({2});
  CHECK(fleet.sim_time() == 0.0);
}
