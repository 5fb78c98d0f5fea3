#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "ipp/backend_sim.hpp"
#include "ipp/field.hpp"

using namespace ipp;

namespace {

struct Harness {
  GridGraph g;
  ScalarField field;
  SimWorld world;
  std::vector<WireMessage> acks, measurements, states;

  explicit Harness(const std::string& ascii, BackendConfig config = {}, NodeId start = 0)
      : g(test::make_grid(ascii)), world(g) {
    FieldSpec spec;
    spec.seed = 2;
    field = generate_field(g, spec);
    world.add_backend("asv0", &field, 0.0, 1, config, start);
    world.broker().subscribe("fleet/asv0/ack", [this](const std::string&, const std::string& p) {
      const auto m = codec_decode(p);
      REQUIRE(m.has_value());
      acks.push_back(*m);
    });
    world.broker().subscribe("fleet/asv0/measurement",
                             [this](const std::string&, const std::string& p) {
                               const auto m = codec_decode(p);
                               REQUIRE(m.has_value());
                               measurements.push_back(*m);
                             });
    world.broker().subscribe("fleet/asv0/state",
                             [this](const std::string&, const std::string& p) {
                               const auto m = codec_decode(p);
                               REQUIRE(m.has_value());
                               states.push_back(*m);
                             });
  }

  void send_goto(NodeId target, std::uint64_t seq) {
    WireMessage cmd;
    cmd.kind = MsgKind::Goto;
    cmd.vehicle_id = "asv0";
    cmd.seq = seq;
    cmd.target_node = target;
    if (g.valid(target)) {
      const auto [lat, lon] = g.node_to_latlon(target);
      cmd.lat = lat;
      cmd.lon = lon;
    }
    world.broker().publish(Topics::cmd("asv0"), codec_encode(cmd));
  }

  int steps_until_ack(int limit = 100000) {
    const auto before = acks.size();
    int n = 0;
    while (acks.size() == before && n < limit) {
      world.step();
      ++n;
    }
    REQUIRE(acks.size() > before);
    return n;
  }
};

}  // namespace

TEST_CASE("goto to the current node acks immediately with a rest measurement") {
  Harness h("11111\n");
  h.send_goto(0, 1);
  h.world.step();
  REQUIRE(h.acks.size() == 1);
  CHECK(h.acks[0].acked_seq == 1);
  CHECK(h.acks[0].reached);
  REQUIRE(h.measurements.size() == 1);
  CHECK(h.measurements[0].node == 0);
  CHECK(h.measurements[0].value == h.field.values[0]);
}

TEST_CASE("adjacent 5 m hop at 0.5 m/s with 0.1 s ticks takes 100 ticks") {
  BackendConfig config;
  config.tick_dt = 0.1;
  config.speed_limit = 0.5;
  Harness h("11111\n", config);
  h.send_goto(1, 1);
  const int ticks = h.steps_until_ack();
  CHECK(ticks == 100);  // 5 m / (0.5 m/s * 0.1 s)
  CHECK(h.acks[0].sim_time == doctest::Approx(10.0));
}

TEST_CASE("one tick covering the whole route reaches and acks in that tick") {
  BackendConfig config;
  config.tick_dt = 100.0;  // 50 m of travel budget per tick
  Harness h("11111\n", config);
  h.send_goto(4, 1);
  h.world.step();
  REQUIRE(h.acks.size() == 1);
  REQUIRE(h.measurements.size() == 4);  // nodes 1,2,3,4
  for (int i = 0; i < 4; ++i) CHECK(h.measurements[i].node == i + 1);
}

TEST_CASE("route follows the Dijkstra path exactly") {
  Harness h("111\n101\n111\n");
  const NodeId target = h.g.node_at(2, 2);
  h.send_goto(target, 1);
  h.steps_until_ack();
  const auto expected = h.g.shortest_path(0, target);
  REQUIRE(h.measurements.size() == expected.nodes.size() - 1);
  for (std::size_t i = 0; i < h.measurements.size(); ++i)
    CHECK(h.measurements[i].node == expected.nodes[i + 1]);
}

TEST_CASE("speed never exceeds the limit between ticks") {
  BackendConfig config;
  config.tick_dt = 1.0;
  config.speed_limit = 0.5;
  Harness h(test::full_grid_ascii(4, 4), config);
  h.send_goto(15, 1);
  auto [px, py] = h.world.backend(0).true_position();
  for (int i = 0; i < 200; ++i) {
    h.world.step();
    const auto [x, y] = h.world.backend(0).true_position();
    const double d = std::hypot(x - px, y - py);
    CHECK(d <= config.speed_limit * config.tick_dt + 1e-9);
    px = x;
    py = y;
  }
}

TEST_CASE("unreachable and invalid targets produce error messages, no ack") {
  Harness h("101\n000\n101\n");
  h.send_goto(1, 1);  // different component
  h.world.step();
  REQUIRE(h.acks.size() == 1);
  CHECK(h.acks[0].kind == MsgKind::Error);
  CHECK(h.acks[0].acked_seq == 1);
  CHECK(h.acks[0].error.find("unreachable") != std::string::npos);
  h.send_goto(999, 2);
  h.world.step();
  REQUIRE(h.acks.size() == 2);
  CHECK(h.acks[1].kind == MsgKind::Error);
}

TEST_CASE("duplicate goto seq re-publishes the stored ack, no new route") {
  Harness h("11111\n");
  h.send_goto(1, 1);
  h.steps_until_ack();
  const auto measurements_before = h.measurements.size();
  h.send_goto(1, 1);  // exact duplicate
  h.world.step();
  REQUIRE(h.acks.size() == 2);
  CHECK(h.acks[1] == h.acks[0]);  // byte-identical stored ack
  CHECK(h.measurements.size() == measurements_before);  // no movement, no measuring
}

TEST_CASE("exactly one ack per accepted goto over a mission") {
  Harness h(test::full_grid_ascii(3, 4));
  Rng rng(4);
  std::uint64_t seq = 0;
  int accepted = 0;
  for (int i = 0; i < 8; ++i) {
    const NodeId t = static_cast<NodeId>(rng.uniform_index(h.g.node_count()));
    h.send_goto(t, ++seq);
    h.steps_until_ack();
    ++accepted;
  }
  CHECK(static_cast<int>(h.acks.size()) == accepted);
  for (std::size_t i = 0; i < h.acks.size(); ++i) CHECK(h.acks[i].acked_seq == i + 1);
}

TEST_CASE("state messages carry gps noise but reach detection uses truth") {
  BackendConfig noisy;
  noisy.gps_noise_std = 3.0;
  noisy.state_period_ticks = 1;
  Harness h("11111\n", noisy);
  h.world.step();  // deliver the construction-time state
  REQUIRE(!h.states.empty());
  const auto [lat0, lon0] = h.g.node_to_latlon(0);
  // vehicle is exactly at node 0, but the reported position carries noise
  CHECK(std::abs(h.states[0].lon - lon0) > 1e-12);
  h.send_goto(2, 1);
  h.steps_until_ack();
  CHECK(h.acks[0].reached);  // reach detection uses the true position
}

TEST_CASE("kill and respawn from a snapshot resumes the in-flight route") {
  Harness h("11111\n");
  h.send_goto(4, 1);
  for (int i = 0; i < 12; ++i) h.world.step();  // partway along the route
  const auto partial = h.measurements.size();
  CHECK(partial < 4);
  const auto snap = h.world.kill_backend(0);
  for (int i = 0; i < 5; ++i) h.world.step();  // dead time: nothing happens
  CHECK(h.measurements.size() == partial);
  h.world.respawn_backend(0, snap);
  h.steps_until_ack();
  REQUIRE(h.measurements.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(h.measurements[i].node == i + 1);
  CHECK(h.measurements.back().seq == 4);  // seq stream continues, no repeats
}

TEST_CASE("re-sent goto after respawn re-publishes the stored ack") {
  Harness h("111\n");
  h.send_goto(2, 1);
  h.steps_until_ack();
  const auto snap = h.world.kill_backend(0);
  h.world.respawn_backend(0, snap);
  h.send_goto(2, 1);  // client retry of the already-completed command
  h.world.step();
  REQUIRE(h.acks.size() == 2);
  CHECK(h.acks[1] == h.acks[0]);
}

TEST_CASE("duplicate vehicle id is refused") {
  const auto g = test::make_grid("11\n");
  SimWorld world(g);
  world.add_backend("asv0", nullptr, 0.0, 1, {}, 0);
  CHECK_THROWS(world.add_backend("asv0", nullptr, 0.0, 1, {}, 1));
}

TEST_CASE("two backends announce themselves on their state topics") {
  const auto g = test::make_grid("111\n");
  SimWorld world(g);
  std::vector<std::string> topics;
  world.broker().subscribe("fleet/+/state", [&](const std::string& t, const std::string&) {
    topics.push_back(t);
  });
  world.add_backend("a", nullptr, 0.0, 1, {}, 0);
  world.add_backend("b", nullptr, 0.0, 2, {}, 1);
  world.step();
  CHECK(std::count(topics.begin(), topics.end(), "fleet/a/state") >= 1);
  CHECK(std::count(topics.begin(), topics.end(), "fleet/b/state") >= 1);
}
