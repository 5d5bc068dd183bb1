#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "lanesim/gap.hpp"
#include "lanesim/idm.hpp"
#include "lanesim/road.hpp"
#include "lanesim/world.hpp"

using namespace lanesim;

namespace {

World make_world(std::uint64_t seed = 1) {
  return World(RoadGeometry{}, ScenarioConfig{}, IdmParams{}, seed);
}

}  // namespace

TEST_CASE("lane centers and bounds") {
  RoadGeometry road;
  CHECK(road.lane_center(0) == doctest::Approx(1.875));
  CHECK(road.lane_center(1) == doctest::Approx(5.625));
  CHECK(road.lane_center(2) == doctest::Approx(9.375));
  CHECK_THROWS_AS(road.lane_center(-1), std::invalid_argument);
  CHECK_THROWS_AS(road.lane_center(3), std::invalid_argument);
  CHECK(road.lane_index_for_y(0.0) == 0);
  CHECK(road.lane_index_for_y(3.8) == 1);
  CHECK(road.lane_index_for_y(11.25) == 2);
}

TEST_CASE("idm free flow") {
  // At the speed limit with no leader the free-flow term vanishes.
  CHECK(idm_accel(30.0, 30.0, std::nullopt) == doctest::Approx(0.0).epsilon(1e-12));
  // From rest the full maximum acceleration applies.
  CHECK(idm_accel(0.0, 30.0, std::nullopt) == doctest::Approx(1.5));
}

TEST_CASE("idm car following at equal speeds") {
  // v = 20 m/s, limit 120 km/h, leader at the desired gap and equal speed:
  // s* = 2 + 20*1.5 = 32, so a = 1.5*(1 - 0.6^4 - 1) = -1.5*0.1296.
  const double v = 20.0;
  const double v_limit = 120.0 / 3.6;
  const IdmParams p;
  const double s_star = idm_desired_gap(v, v, p);
  CHECK(s_star == doctest::Approx(32.0));
  const double expected = p.a_max * (1.0 - std::pow(v / v_limit, p.delta) - 1.0);
  const double got = idm_accel(v, v_limit, LeaderObs{32.0, v}, p);
  CHECK(got == doctest::Approx(expected).epsilon(1e-12));
  CHECK(got == doctest::Approx(-0.1944).epsilon(1e-6));
}

TEST_CASE("idm rejects nonpositive gap") {
  CHECK_THROWS_AS(idm_accel(20.0, 30.0, LeaderObs{0.0, 20.0}), std::invalid_argument);
  CHECK_THROWS_AS(idm_accel(20.0, 30.0, LeaderObs{-1.0, 20.0}), std::invalid_argument);
}

TEST_CASE("modified idm free gap gate") {
  const IdmParams p;
  const double v = 25.0;
  const double v_limit = 30.0;
  const double s_star = idm_desired_gap(v, v, p);

  // Far leader: pure free flow.
  const double free_flow = modified_idm_accel(v, v_limit, std::nullopt, p);
  CHECK(modified_idm_accel(v, v_limit, LeaderObs{10.0 * s_star, v}, p) ==
        doctest::Approx(free_flow));
  // Plain IDM still feels a far leader slightly.
  CHECK(idm_accel(v, v_limit, LeaderObs{10.0 * s_star, v}, p) < free_flow);

  // At gap = s* with zero speed difference and v at the limit the gate is
  // off and the braking matches plain IDM: a = -a_max.
  const double s_star_lim = idm_desired_gap(v_limit, v_limit, p);
  CHECK(modified_idm_accel(v_limit, v_limit, LeaderObs{s_star_lim, v_limit}, p) ==
        doctest::Approx(-p.a_max));
  CHECK(idm_accel(v_limit, v_limit, LeaderObs{s_star_lim, v_limit}, p) ==
        doctest::Approx(-p.a_max));

  // Without a leader the two variants agree for any speed.
  for (double s = 0.0; s <= 33.0; s += 3.3) {
    CHECK(modified_idm_accel(s, v_limit, std::nullopt, p) ==
          doctest::Approx(idm_accel(s, v_limit, std::nullopt, p)));
  }
}

TEST_CASE("idm monotonicity in speed and gap") {
  const IdmParams p;
  Rng rng = make_rng(7, 0);
  std::uniform_real_distribution<double> gap_dist(5.0, 200.0);
  std::uniform_real_distribution<double> v_dist(0.0, 33.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double gap = gap_dist(rng);
    const double v_lead = v_dist(rng);
    const double v_limit = 33.33;
    double prev = std::numeric_limits<double>::infinity();
    for (double v = 0.0; v <= 33.0; v += 0.5) {
      const double a = idm_accel(v, v_limit, LeaderObs{gap, v_lead}, p);
      CHECK(a <= prev + 1e-12);
      CHECK(a <= p.a_max + 1e-12);
      prev = a;
    }
    double prev_gap_accel = -std::numeric_limits<double>::infinity();
    const double v = v_dist(rng);
    for (double g = 2.0; g <= 300.0; g *= 1.4) {
      const double a = idm_accel(v, v_limit, LeaderObs{g, v_lead}, p);
      CHECK(a >= prev_gap_accel - 1e-12);
      prev_gap_accel = a;
    }
  }
}

TEST_CASE("idm equilibrium gap matches root-finding oracle") {
  // With dv = 0 and a = 0 the equilibrium gap is s*/sqrt(1 - (v/v0)^delta).
  const IdmParams p;
  const double v0 = 120.0 / 3.6;
  for (double ratio : {0.5, 0.8, 0.9}) {
    const double v = ratio * v0;
    // Bisection oracle on the plain IDM acceleration.
    double lo = 0.5, hi = 5000.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (idm_accel(v, v0, LeaderObs{mid, v}, p) < 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double oracle_gap = 0.5 * (lo + hi);
    const double closed_form =
        idm_desired_gap(v, v, p) / std::sqrt(1.0 - std::pow(ratio, p.delta));
    CHECK(oracle_gap == doctest::Approx(closed_form).epsilon(1e-9));
    CHECK(std::abs(idm_accel(v, v0, LeaderObs{closed_form, v}, p)) < 1e-6);
  }
}

TEST_CASE("dual leader takes the smaller acceleration") {
  const IdmParams p;
  const double v = 25.0, v_limit = 30.0;
  const LeaderObs close{12.0, 20.0};
  const LeaderObs far{150.0, 28.0};
  const double a_close = modified_idm_accel(v, v_limit, close, p);
  const double a_far = modified_idm_accel(v, v_limit, far, p);
  CHECK(a_close < a_far);

  CHECK(dual_leader_accel(v, v_limit, close, far, p) ==
        doctest::Approx(std::min(a_close, a_far)));
  // One leader only: that value.
  CHECK(dual_leader_accel(v, v_limit, std::nullopt, far, p) == doctest::Approx(a_far));
  // Identical leaders: same as a single call.
  CHECK(dual_leader_accel(v, v_limit, close, close, p) == doctest::Approx(a_close));
  // No leaders: free flow.
  CHECK(dual_leader_accel(v, v_limit, std::nullopt, std::nullopt, p) ==
        doctest::Approx(modified_idm_accel(v, v_limit, std::nullopt, p)));

  // Never above either single-leader value.
  Rng rng = make_rng(3, 0);
  std::uniform_real_distribution<double> gap_dist(3.0, 300.0);
  std::uniform_real_distribution<double> v_dist(5.0, 33.0);
  for (int i = 0; i < 100; ++i) {
    const LeaderObs l1{gap_dist(rng), v_dist(rng)};
    const LeaderObs l2{gap_dist(rng), v_dist(rng)};
    const double both = dual_leader_accel(v, v_limit, l1, l2, p);
    CHECK(both <= modified_idm_accel(v, v_limit, l1, p) + 1e-12);
    CHECK(both <= modified_idm_accel(v, v_limit, l2, p) + 1e-12);
  }
}

TEST_CASE("gap assessment formula") {
  SafetyParams params;

  SUBCASE("no neighbors accepts") {
    const auto g = assess_gap(25.0, std::nullopt, std::nullopt, params);
    CHECK(g.accepted);
    CHECK(std::isinf(g.lead_gap));
    CHECK(std::isinf(g.lag_gap));
    CHECK(g.lead_required == doctest::Approx(2.0));
    CHECK(g.lag_required == doctest::Approx(2.0));
  }

  SUBCASE("zero speed difference boundary") {
    const auto g = assess_gap(20.0, NeighborObs{2.0, 20.0}, NeighborObs{2.0, 20.0},
                              params);
    CHECK(g.lead_required == doctest::Approx(2.0));
    CHECK(g.lag_required == doctest::Approx(2.0));
    CHECK(g.accepted);
  }

  SUBCASE("fast lag vehicle rejects") {
    // lag_required = 2 + (26^2 - 20^2) / (2*3) = 48.
    const auto g = assess_gap(20.0, std::nullopt, NeighborObs{40.0, 26.0}, params);
    CHECK(g.lag_required == doctest::Approx(48.0));
    CHECK_FALSE(g.accepted);
    const auto g2 = assess_gap(20.0, std::nullopt, NeighborObs{48.0, 26.0}, params);
    CHECK(g2.accepted);
  }

  SUBCASE("requirements grow with the squared-speed margin") {
    double prev = 0.0;
    for (double dv = 0.0; dv <= 10.0; dv += 1.0) {
      const auto g = assess_gap(20.0, NeighborObs{1000.0, 20.0 - dv}, std::nullopt,
                                params);
      CHECK(g.lead_required >= params.d_min);
      CHECK(g.lead_required >= prev);
      // Exact kinematic form: d_min + (v_ego^2 - v_lead^2) / (2 b_max).
      const double expect =
          params.d_min +
          (20.0 * 20.0 - (20.0 - dv) * (20.0 - dv)) / (2.0 * params.b_max);
      CHECK(g.lead_required == doctest::Approx(expect).epsilon(1e-12));
      prev = g.lead_required;
    }
    // Favorable speed difference never drops below the minimum distance.
    const auto g = assess_gap(20.0, NeighborObs{1000.0, 30.0}, std::nullopt, params);
    CHECK(g.lead_required == doctest::Approx(params.d_min));
  }

  SUBCASE("missing neighbor equals infinite gap") {
    const auto a = assess_gap(22.0, std::nullopt, NeighborObs{30.0, 25.0});
    const auto b = assess_gap(
        22.0, NeighborObs{std::numeric_limits<double>::infinity(), 22.0},
        NeighborObs{30.0, 25.0});
    CHECK(a.accepted == b.accepted);
    CHECK(a.lag_required == doctest::Approx(b.lag_required));
  }
}

TEST_CASE("spawn countdown arithmetic") {
  // An interval draw of 7.2 s at dt = 0.1 becomes 72 steps.
  CHECK(std::llround(7.2 / 0.1) == 72);
}

TEST_CASE("world spawning, exits and determinism") {
  SUBCASE("expected spawn count over 4000 simulated seconds") {
    World world = make_world(42);
    World::StepHooks hooks;
    for (int i = 0; i < 40000; ++i) world.step(hooks);
    // 3 lanes * 4000 s / 7.5 s mean interval = 1600 expected, +/-20%.
    CHECK(world.spawned_count() >= 1280);
    CHECK(world.spawned_count() <= 1920);
    // Population accounting: on-road = spawned - exited.
    CHECK(world.vehicles().size() == world.spawned_count() - world.exited_count());
  }

  SUBCASE("deterministic trajectories for a fixed seed") {
    World a = make_world(7);
    World b = make_world(7);
    World::StepHooks hooks;
    for (int i = 0; i < 3000; ++i) {
      a.step(hooks);
      b.step(hooks);
    }
    REQUIRE(a.vehicles().size() == b.vehicles().size());
    for (std::size_t i = 0; i < a.vehicles().size(); ++i) {
      CHECK(a.vehicles()[i].vid == b.vehicles()[i].vid);
      CHECK(a.vehicles()[i].x == b.vehicles()[i].x);
      CHECK(a.vehicles()[i].v == b.vehicles()[i].v);
      CHECK(a.vehicles()[i].y == b.vehicles()[i].y);
    }
  }

  SUBCASE("y stays within the road and speeds stay nonnegative") {
    World world = make_world(5);
    World::StepHooks hooks;
    for (int i = 0; i < 5000; ++i) {
      world.step(hooks);
      for (const auto& v : world.vehicles()) {
        CHECK(v.y >= 0.0);
        CHECK(v.y <= world.road().width());
        CHECK(v.v >= 0.0);
      }
    }
  }

  SUBCASE("collision freedom in traffic-only runs") {
    World world = make_world(99);
    World::StepHooks hooks;
    double min_gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 20000; ++i) {
      world.step(hooks);  // throws SimulationFault on overlap
      min_gap = std::min(min_gap, world.min_bumper_gap());
    }
    CHECK(min_gap >= 0.0);
  }
}

TEST_CASE("world longitudinal integration") {
  // a = 0, theta = 0: x advances v*dt per step.
  World world = make_world(1);
  World::StepHooks hooks;
  hooks.accel = [](const World&, const VehicleState&) { return 0.0; };
  while (world.vehicles().empty()) world.step(hooks);
  const double x0 = world.vehicles()[0].x;
  const double v0 = world.vehicles()[0].v;
  world.step(hooks);
  REQUIRE_FALSE(world.vehicles().empty());
  CHECK(world.vehicles()[0].x == doctest::Approx(x0 + v0 * 0.1));

  // Speed clamps at zero under hard braking.
  World world2 = make_world(2);
  World::StepHooks brake;
  brake.accel = [](const World&, const VehicleState&) { return -100.0; };
  while (world2.vehicles().empty()) world2.step(brake);
  for (int i = 0; i < 50 && !world2.vehicles().empty(); ++i) world2.step(brake);
  if (!world2.vehicles().empty()) {
    CHECK(world2.vehicles()[0].v == 0.0);
    // Commanded deceleration is clamped at the brake limit.
    CHECK(world2.vehicles()[0].a == doctest::Approx(-kBrakeLimit));
  }
}

TEST_CASE("vehicles are removed past the segment end") {
  World world = make_world(3);
  World::StepHooks hooks;
  while (world.vehicles().empty()) world.step(hooks);
  const auto vid = world.vehicles()[0].vid;
  int guard = 0;
  while (world.find(vid) != nullptr && guard++ < 100000) world.step(hooks);
  CHECK(world.find(vid) == nullptr);
  CHECK(world.exited_count() >= 1);
}

TEST_CASE("entrance blocking defers spawns") {
  // No freshly spawned vehicle shares its lane with another vehicle inside
  // the 15 m entrance window.
  World world = make_world(17);
  World::StepHooks hooks;
  for (int i = 0; i < 20000; ++i) {
    const auto report = world.step(hooks);
    for (const auto vid : report.spawned) {
      const VehicleState* nv = world.find(vid);
      REQUIRE(nv != nullptr);
      for (const auto& other : world.vehicles()) {
        if (other.vid == vid) continue;
        if (other.lane_index(world.road()) == nv->lane_index(world.road())) {
          CHECK(other.x >= 15.0);
        }
      }
    }
  }
}
