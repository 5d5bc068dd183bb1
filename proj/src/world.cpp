#include "lanesim/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lanesim {

World::World(RoadGeometry road, ScenarioConfig config, IdmParams idm, std::uint64_t seed)
    : road_(road), config_(config), idm_(idm), rng_(derive_seed(seed, kStreamWorld)) {
  if (road_.n_lanes < 2 || road_.lane_width <= 0.0 || road_.segment_length <= 0.0) {
    throw std::invalid_argument("World: invalid road geometry");
  }
  if (config_.dt <= 0.0 ||
      config_.departure_interval_min_s > config_.departure_interval_max_s) {
    throw std::invalid_argument("World: invalid scenario config");
  }
  next_spawn_step_.resize(road_.n_lanes);
  for (int lane = 0; lane < road_.n_lanes; ++lane) {
    const double interval = uniform_real(rng_, config_.departure_interval_min_s,
                                         config_.departure_interval_max_s);
    next_spawn_step_[lane] = std::llround(interval / config_.dt);
  }
}

const VehicleState* World::find(std::uint64_t vid) const {
  for (const auto& v : vehicles_) {
    if (v.vid == vid) return &v;
  }
  return nullptr;
}

VehicleState* World::find_mutable(std::uint64_t vid) {
  for (auto& v : vehicles_) {
    if (v.vid == vid) return &v;
  }
  return nullptr;
}

const SpawnDraws& World::spawn_draws(std::uint64_t vid) const {
  for (std::size_t i = 0; i < vehicles_.size(); ++i) {
    if (vehicles_[i].vid == vid) return draws_[i];
  }
  throw std::invalid_argument("spawn_draws: unknown vehicle id");
}

void World::add_vehicle(const VehicleState& vehicle) {
  if (find(vehicle.vid) != nullptr) {
    throw std::invalid_argument("add_vehicle: duplicate vehicle id");
  }
  if (vehicle.y < 0.0 || vehicle.y > road_.width()) {
    throw std::invalid_argument("add_vehicle: y outside the road");
  }
  SpawnDraws draws;
  draws.command_x = road_.segment_length * 2.0;  // never commanded
  draws.command_dir = 0;
  vehicles_.push_back(vehicle);
  draws_.push_back(draws);
  next_vid_ = std::max(next_vid_, vehicle.vid + 1);
  ++spawned_count_;
}

void World::occupied_lanes(const VehicleState& v, int out[2], int* count) const {
  const double half = road_.lane_width * 0.25;
  const int lo = road_.lane_index_for_y(v.y - half);
  const int hi = road_.lane_index_for_y(v.y + half);
  out[0] = lo;
  *count = 1;
  if (hi != lo) {
    out[1] = hi;
    *count = 2;
  }
}

bool World::occupies_lane(const VehicleState& v, int lane) const {
  int lanes[2];
  int n = 0;
  occupied_lanes(v, lanes, &n);
  for (int i = 0; i < n; ++i) {
    if (lanes[i] == lane) return true;
  }
  return false;
}

std::optional<World::Neighbor> World::leader_in_lane(int lane,
                                                     const VehicleState& ego) const {
  const VehicleState* best = nullptr;
  for (const auto& v : vehicles_) {
    if (v.vid == ego.vid || v.x <= ego.x) continue;
    if (!occupies_lane(v, lane)) continue;
    if (!best || v.x < best->x) best = &v;
  }
  if (!best) return std::nullopt;
  return Neighbor{best, best->x - ego.x - best->length};
}

std::optional<World::Neighbor> World::follower_in_lane(int lane,
                                                       const VehicleState& ego) const {
  const VehicleState* best = nullptr;
  for (const auto& v : vehicles_) {
    if (v.vid == ego.vid || v.x >= ego.x) continue;
    if (!occupies_lane(v, lane)) continue;
    if (!best || v.x > best->x) best = &v;
  }
  if (!best) return std::nullopt;
  return Neighbor{best, ego.x - best->x - ego.length};
}

double World::default_accel(const VehicleState& v) const {
  int lanes[2];
  int n = 0;
  occupied_lanes(v, lanes, &n);
  double accel = std::numeric_limits<double>::infinity();
  bool any = false;
  for (int i = 0; i < n; ++i) {
    auto lead = leader_in_lane(lanes[i], v);
    if (lead && lead->gap <= 0.0) {
      return -kBrakeLimit;  // overlapping a laterally offset vehicle
    }
    std::optional<LeaderObs> obs;
    if (lead) obs = LeaderObs{lead->gap, lead->vehicle->v};
    accel = std::min(accel, modified_idm_accel(v.v, v.v_limit, obs, idm_));
    any = true;
  }
  if (!any) {
    accel = modified_idm_accel(v.v, v.v_limit, std::nullopt, idm_);
  }
  return accel;
}

World::StepReport World::step(const StepHooks& hooks) {
  StepReport report;

  // Acceleration decisions on the pre-integration snapshot.
  std::vector<double> accels(vehicles_.size());
  for (std::size_t i = 0; i < vehicles_.size(); ++i) {
    const double a =
        hooks.accel ? hooks.accel(*this, vehicles_[i]) : default_accel(vehicles_[i]);
    accels[i] = std::max(a, -kBrakeLimit);
  }

  integrate_longitudinal(accels);

  if (hooks.lateral_pass) {
    hooks.lateral_pass(*this);
  }

  remove_exited(report);
  spawn_traffic(report);
  check_overlaps();
  ++clock_step_;
  return report;
}

void World::integrate_longitudinal(const std::vector<double>& accels) {
  const double dt = config_.dt;
  for (std::size_t i = 0; i < vehicles_.size(); ++i) {
    auto& v = vehicles_[i];
    v.a = accels[i];
    v.v = std::max(0.0, v.v + v.a * dt);
    v.x += v.v * std::cos(v.theta) * dt;
  }
}

void World::remove_exited(StepReport& report) {
  for (std::size_t i = 0; i < vehicles_.size();) {
    if (vehicles_[i].x > road_.segment_length) {
      report.removed.push_back(vehicles_[i].vid);
      vehicles_.erase(vehicles_.begin() + static_cast<long>(i));
      draws_.erase(draws_.begin() + static_cast<long>(i));
      ++exited_count_;
    } else {
      ++i;
    }
  }
}

void World::spawn_traffic(StepReport& report) {
  for (int lane = 0; lane < road_.n_lanes; ++lane) {
    if (clock_step_ < next_spawn_step_[lane]) continue;

    // Entrance must be clear; otherwise the spawn stays pending and is
    // retried next step.
    bool blocked = false;
    for (const auto& v : vehicles_) {
      if (v.x < config_.entrance_clear_x && occupies_lane(v, lane)) {
        blocked = true;
        break;
      }
    }
    if (blocked) continue;

    VehicleState veh;
    veh.vid = next_vid_++;
    veh.x = 0.0;
    veh.y = road_.lane_center(lane);
    veh.theta = 0.0;
    veh.omega = 0.0;
    veh.a = 0.0;
    veh.length = config_.vehicle_length;
    veh.v_limit = uniform_real(rng_, config_.v_limit_min, config_.v_limit_max);

    SpawnDraws draws;
    draws.command_x = uniform_real(rng_, config_.command_x_min, config_.command_x_max);
    if (lane == 0) {
      draws.command_dir = 1;
    } else if (lane == road_.n_lanes - 1) {
      draws.command_dir = -1;
    } else {
      draws.command_dir = uniform_index(rng_, 2) == 0 ? -1 : 1;
    }

    auto lead = leader_in_lane(lane, veh);
    veh.v = lead ? std::min(veh.v_limit, lead->vehicle->v) : veh.v_limit;

    vehicles_.push_back(veh);
    draws_.push_back(draws);
    ++spawned_count_;
    report.spawned.push_back(veh.vid);
    const double interval = uniform_real(rng_, config_.departure_interval_min_s,
                                         config_.departure_interval_max_s);
    next_spawn_step_[lane] = clock_step_ + std::llround(interval / config_.dt);
  }
}

double World::min_bumper_gap() const {
  double min_gap = std::numeric_limits<double>::infinity();
  // Derived-lane adjacency; O(n^2) is fine at these population sizes.
  for (const auto& rear : vehicles_) {
    const int lane = rear.lane_index(road_);
    for (const auto& front : vehicles_) {
      if (front.vid == rear.vid || front.lane_index(road_) != lane) continue;
      if (front.x <= rear.x) continue;
      min_gap = std::min(min_gap, front.x - rear.x - front.length);
    }
  }
  return min_gap;
}

void World::check_overlaps() const {
  for (const auto& rear : vehicles_) {
    const int lane = rear.lane_index(road_);
    for (const auto& front : vehicles_) {
      if (front.vid == rear.vid || front.lane_index(road_) != lane) continue;
      if (front.x < rear.x || (front.x == rear.x && front.vid < rear.vid)) continue;
      const double gap = front.x - rear.x - front.length;
      if (gap < 0.0) {
        std::ostringstream msg;
        msg << "simulation fault: vehicles " << rear.vid << " and " << front.vid
            << " overlap in lane " << lane << " at step " << clock_step_
            << " (gap " << gap << " m)";
        throw SimulationFault(msg.str());
      }
    }
  }
}

}  // namespace lanesim
