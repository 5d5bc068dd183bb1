#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lanesim/idm.hpp"
#include "lanesim/rng.hpp"
#include "lanesim/road.hpp"
#include "lanesim/scenario.hpp"
#include "lanesim/vehicle.hpp"

namespace lanesim {

// Raised when two same-lane vehicles overlap; indicates a simulator bug and
// aborts the run.
struct SimulationFault : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Per-vehicle draws made at spawn time. The command point and direction feed
// the scenario-configured lane-change command generator; plain traffic runs
// ignore them.
struct SpawnDraws {
  double command_x = 0.0;
  int command_dir = 0;  // +1 left, -1 right
};

// Owns road geometry, the vehicle population, stochastic traffic generation
// and the fixed-step simulation clock. A single logical thread steps the
// world; records are value-like.
class World {
 public:
  struct StepHooks {
    // Longitudinal acceleration override (m/s^2, pre brake clamp). When
    // absent, the default modified-IDM car following is used.
    std::function<double(const World&, const VehicleState&)> accel;
    // Lateral pass, run after longitudinal integration. Only vehicles in an
    // active lane-change episode (or post-episode recovery) move laterally.
    std::function<void(World&)> lateral_pass;
  };

  struct StepReport {
    std::vector<std::uint64_t> spawned;
    std::vector<std::uint64_t> removed;
  };

  World(RoadGeometry road, ScenarioConfig config, IdmParams idm, std::uint64_t seed);

  StepReport step(const StepHooks& hooks = {});

  const RoadGeometry& road() const { return road_; }
  const ScenarioConfig& config() const { return config_; }
  const IdmParams& idm() const { return idm_; }
  double dt() const { return config_.dt; }
  long clock_step() const { return clock_step_; }
  double time_s() const { return clock_step_ * config_.dt; }

  const std::vector<VehicleState>& vehicles() const { return vehicles_; }
  const VehicleState* find(std::uint64_t vid) const;
  VehicleState* find_mutable(std::uint64_t vid);
  const SpawnDraws& spawn_draws(std::uint64_t vid) const;

  // Inserts a scripted vehicle (scenario setup and tests). The vid must be
  // unused; command draws default to "never".
  void add_vehicle(const VehicleState& vehicle);

  std::uint64_t spawned_count() const { return spawned_count_; }
  std::uint64_t exited_count() const { return exited_count_; }

  // Lanes a vehicle occupies for control visibility: every lane overlapped
  // by [y - w/4, y + w/4]. A vehicle within a quarter lane of a boundary is
  // visible in both adjacent lanes, which covers the dual-leader rule.
  void occupied_lanes(const VehicleState& v, int out[2], int* count) const;
  bool occupies_lane(const VehicleState& v, int lane) const;

  // Nearest vehicle ahead of / behind the ego in a lane (occupancy-based),
  // with bumper-to-bumper gap. Gaps can be nonpositive for laterally offset
  // vehicles sharing a lane band.
  struct Neighbor {
    const VehicleState* vehicle;
    double gap;
  };
  std::optional<Neighbor> leader_in_lane(int lane, const VehicleState& ego) const;
  std::optional<Neighbor> follower_in_lane(int lane, const VehicleState& ego) const;

  // Default car following: min of modified IDM over the occupied lanes;
  // emergency braking on a nonpositive gap.
  double default_accel(const VehicleState& v) const;

  // Smallest same-lane (derived lane) bumper gap, +inf when no lane holds
  // two vehicles. Negative means overlap.
  double min_bumper_gap() const;

 private:
  void integrate_longitudinal(const std::vector<double>& accels);
  void remove_exited(StepReport& report);
  void spawn_traffic(StepReport& report);
  void check_overlaps() const;

  RoadGeometry road_;
  ScenarioConfig config_;
  IdmParams idm_;
  Rng rng_;
  long clock_step_ = 0;
  std::uint64_t next_vid_ = 1;
  std::uint64_t spawned_count_ = 0;
  std::uint64_t exited_count_ = 0;
  std::vector<VehicleState> vehicles_;
  std::vector<SpawnDraws> draws_;  // parallel to vehicles_
  std::vector<long> next_spawn_step_;  // per lane
};

}  // namespace lanesim
