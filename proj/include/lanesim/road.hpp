#pragma once

#include <cmath>
#include <stdexcept>

namespace lanesim {

// Straight multi-lane highway segment. y is measured in meters from the
// right road edge, increasing leftward; lane i spans [i*w, (i+1)*w].
struct RoadGeometry {
  int n_lanes = 3;
  double segment_length = 1000.0;  // m
  double lane_width = 3.75;        // m
  double curvature = 0.0;          // 1/m, 0 for straight

  double width() const { return n_lanes * lane_width; }

  bool valid_lane(int lane) const { return lane >= 0 && lane < n_lanes; }

  double lane_center(int lane) const {
    if (!valid_lane(lane)) {
      throw std::invalid_argument("lane_center: lane index out of range");
    }
    return (lane + 0.5) * lane_width;
  }

  // Lane of a lateral position; boundary values resolve to the upper lane,
  // the left road edge to the leftmost lane.
  int lane_index_for_y(double y) const {
    int lane = static_cast<int>(std::floor(y / lane_width));
    if (lane < 0) lane = 0;
    if (lane >= n_lanes) lane = n_lanes - 1;
    return lane;
  }

  int nearest_lane(double y) const {
    return lane_index_for_y(y);
  }
};

}  // namespace lanesim
