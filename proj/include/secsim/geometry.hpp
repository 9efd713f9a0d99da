// Planar geometry with heights: Poisson sampling, rectangular prism
// obstacles, line-of-sight blockage and first-order specular reflections.
#pragma once

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "secsim/config.hpp"
#include "secsim/kernels.hpp"
#include "secsim/rng.hpp"

namespace secsim {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

/// A point in plan view with an antenna height.
struct Node {
  Vec2 pos;
  double height = 0.0;
};

struct RectObstacle {
  Vec2 center;
  double length = 0.0;       // along the orientation axis
  double width = 0.0;
  double orientation = 0.0;  // anticlockwise from x, in [0, pi)
  double height = 0.0;
  bool is_reflector = true;

  [[nodiscard]] bool contains(Vec2 p) const;
};

/// An immutable realization of the environment. Obstacles are mirrored into a
/// structure-of-arrays layout for the blockage kernels.
class WorldMap {
 public:
  WorldMap() { soa_.finalize(); }
  WorldMap(Vec2 extent, std::vector<RectObstacle> obstacles, std::vector<Vec2> bs_positions,
           double bs_height, double granularity);

  [[nodiscard]] Vec2 extent() const { return extent_; }
  [[nodiscard]] const std::vector<RectObstacle>& obstacles() const { return obstacles_; }
  [[nodiscard]] const std::vector<Vec2>& bs_positions() const { return bs_positions_; }
  [[nodiscard]] double bs_height() const { return bs_height_; }
  [[nodiscard]] double granularity() const { return granularity_; }
  [[nodiscard]] const kernels::ObstacleSoA& soa() const { return soa_; }

  /// True if p lies inside any obstacle footprint.
  [[nodiscard]] bool inside_obstacle(Vec2 p) const;
  /// Same obstacles, different base stations.
  [[nodiscard]] WorldMap with_base_stations(std::vector<Vec2> bs_positions, double bs_height) const;

 private:
  Vec2 extent_{};
  std::vector<RectObstacle> obstacles_;
  std::vector<Vec2> bs_positions_;
  double bs_height_ = 0.0;
  double granularity_ = 1.0;
  kernels::ObstacleSoA soa_;
};

struct ReflectionPath {
  std::size_t reflector = 0;  // index into WorldMap::obstacles()
  Vec2 reflection_point;
  double reflection_height = 0.0;  // height of the ray where it meets the face
  double path_length = 0.0;        // plan-view |tx-R| + |R-rx|
  double slant_length = 0.0;       // unfolded 3-D length, for path loss
  double delay = 0.0;              // path_length / c
  double direct_distance = 0.0;    // plan-view |tx-rx|
  double incidence_angle = 0.0;    // from the face normal, rad
  double reflection_angle = 0.0;   // outgoing, from the face normal
};

/// Homogeneous PPP on [0,w]x[0,h]: Poisson(density*area) i.i.d. uniform points.
std::vector<Vec2> sample_ppp(double density, Vec2 extent, Rng& rng);

/// Obstacle realization over the configured map, without base stations.
WorldMap sample_obstacles(const SystemParams& params, Rng& rng);

/// Distance of a uniform point in a disk of the given radius: r*sqrt(u).
double sample_disk_distance(double radius, Rng& rng);

/// Draw an obstacle height from the configured height law.
double sample_obstacle_height(const SystemParams& params, Rng& rng);

/// P(H <= h) under the configured height law.
double obstacle_height_cdf(const SystemParams& params, double h);

/// True iff an obstacle taller than the tx-rx ray over its footprint crossing
/// stands between them. `skip` excludes one obstacle index.
bool los_blocked(const Node& tx, const Node& rx, const WorldMap& map,
                 std::ptrdiff_t skip = -1);

/// All unblocked first-order specular paths (image method over every face of
/// every reflector).
std::vector<ReflectionPath> find_first_order_reflections(const Node& tx, const Node& rx,
                                                         const WorldMap& map);

/// Obstacle CSV: header "cx,cy,l,w,theta,h,reflector", one row per obstacle,
/// full double precision so a reload reproduces the map exactly.
void write_obstacles_csv(std::ostream& os, const WorldMap& map);
/// Parse the same schema. Throws ConfigError on malformed rows.
std::vector<RectObstacle> read_obstacles_csv(std::istream& is);

}  // namespace secsim
