#include "secsim/geometry.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace secsim {

bool RectObstacle::contains(Vec2 p) const {
  const Vec2 r = p - center;
  const double c = std::cos(orientation);
  const double s = std::sin(orientation);
  const double u = r.x * c + r.y * s;
  const double v = r.y * c - r.x * s;
  return std::abs(u) <= 0.5 * length && std::abs(v) <= 0.5 * width;
}

WorldMap::WorldMap(Vec2 extent, std::vector<RectObstacle> obstacles,
                   std::vector<Vec2> bs_positions, double bs_height, double granularity)
    : extent_(extent),
      obstacles_(std::move(obstacles)),
      bs_positions_(std::move(bs_positions)),
      bs_height_(bs_height),
      granularity_(granularity) {
  soa_.reserve(obstacles_.size());
  for (const auto& o : obstacles_) {
    soa_.push_back(o.center.x, o.center.y, o.orientation, o.length, o.width, o.height);
  }
  soa_.finalize();
}

bool WorldMap::inside_obstacle(Vec2 p) const {
  for (const auto& o : obstacles_) {
    if (o.contains(p)) return true;
  }
  return false;
}

WorldMap WorldMap::with_base_stations(std::vector<Vec2> bs_positions, double bs_height) const {
  WorldMap out = *this;
  out.bs_positions_ = std::move(bs_positions);
  out.bs_height_ = bs_height;
  return out;
}

std::vector<Vec2> sample_ppp(double density, Vec2 extent, Rng& rng) {
  std::vector<Vec2> points;
  const double mean = density * extent.x * extent.y;
  if (!(mean > 0.0)) return points;
  const auto n = std::poisson_distribution<long>(mean)(rng);
  points.reserve(static_cast<std::size_t>(n));
  std::uniform_real_distribution<double> ux(0.0, extent.x);
  std::uniform_real_distribution<double> uy(0.0, extent.y);
  for (long i = 0; i < n; ++i) {
    const double x = ux(rng);
    const double y = uy(rng);
    points.push_back({x, y});
  }
  return points;
}

double sample_disk_distance(double radius, Rng& rng) {
  if (!(radius > 0.0)) throw std::invalid_argument("sample_disk_distance: radius must be positive");
  return radius * std::sqrt(uniform01(rng));
}

double sample_obstacle_height(const SystemParams& params, Rng& rng) {
  const double lo = params.obstacle_height_min;
  const double hi = params.obstacle_height_max;
  const double u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  switch (params.height_law) {
    case HeightLaw::Uniform:
      return lo + (hi - lo) * u1;
    case HeightLaw::Triangular:
      return lo + (hi - lo) * 0.5 * (u1 + u2);
  }
  return lo;
}

double obstacle_height_cdf(const SystemParams& params, double h) {
  const double lo = params.obstacle_height_min;
  const double hi = params.obstacle_height_max;
  if (h < lo) return 0.0;
  if (h >= hi) return 1.0;
  const double x = (h - lo) / (hi - lo);
  switch (params.height_law) {
    case HeightLaw::Uniform:
      return x;
    case HeightLaw::Triangular:
      return x <= 0.5 ? 2.0 * x * x : 1.0 - 2.0 * (1.0 - x) * (1.0 - x);
  }
  return x;
}

WorldMap sample_obstacles(const SystemParams& params, Rng& rng) {
  const Vec2 extent{params.map_width, params.map_height};
  const auto centers = sample_ppp(params.obstacle_density, extent, rng);

  std::vector<RectObstacle> obstacles;
  obstacles.reserve(centers.size());
  for (const auto& c : centers) {
    RectObstacle o;
    o.center = c;
    const double ul = uniform01(rng);
    const double uw = uniform01(rng);
    if (params.size_law == SizeLaw::Uniform) {
      o.length = params.obstacle_length_mean * (0.5 + ul);
      o.width = params.obstacle_width_mean * (0.5 + uw);
    } else {
      o.length = params.obstacle_length_mean;
      o.width = params.obstacle_width_mean;
    }
    o.orientation = kPi * uniform01(rng);
    if (o.orientation >= kPi) o.orientation = 0.0;
    o.height = sample_obstacle_height(params, rng);
    o.is_reflector = uniform01(rng) < params.reflector_fraction;
    obstacles.push_back(o);
  }
  return WorldMap(extent, std::move(obstacles), {}, params.bs_height, params.map_granularity);
}

bool los_blocked(const Node& tx, const Node& rx, const WorldMap& map, std::ptrdiff_t skip) {
  if (tx.pos == rx.pos) throw std::invalid_argument("los_blocked: tx and rx coincide");
  const kernels::Segment3 seg{tx.pos.x, tx.pos.y, tx.height, rx.pos.x, rx.pos.y, rx.height};
  return kernels::segment_blocked(map.soa(), seg, skip);
}

namespace {

struct Face {
  Vec2 anchor;   // face midpoint
  Vec2 normal;   // outward unit normal
  Vec2 tangent;  // unit vector along the face
  double half_extent;
};

std::array<Face, 4> faces_of(const RectObstacle& o) {
  const Vec2 u{std::cos(o.orientation), std::sin(o.orientation)};
  const Vec2 v{-u.y, u.x};
  const double hl = 0.5 * o.length;
  const double hw = 0.5 * o.width;
  return {{
      {o.center + hl * u, u, v, hw},
      {o.center - hl * u, -1.0 * u, v, hw},
      {o.center + hw * v, v, u, hl},
      {o.center - hw * v, -1.0 * v, u, hl},
  }};
}

}  // namespace

std::vector<ReflectionPath> find_first_order_reflections(const Node& tx, const Node& rx,
                                                         const WorldMap& map) {
  if (tx.pos == rx.pos) throw std::invalid_argument("find_first_order_reflections: tx == rx");
  std::vector<ReflectionPath> paths;
  const auto& obstacles = map.obstacles();
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    const auto& o = obstacles[i];
    if (!o.is_reflector) continue;
    for (const auto& f : faces_of(o)) {
      // Both ends must see the face from outside.
      const double d_tx = dot(f.normal, tx.pos - f.anchor);
      const double d_rx = dot(f.normal, rx.pos - f.anchor);
      if (!(d_tx > 0.0 && d_rx > 0.0)) continue;

      const Vec2 image = tx.pos - (2.0 * d_tx) * f.normal;
      const double frac = d_tx / (d_tx + d_rx);
      const Vec2 r = image + frac * (rx.pos - image);
      if (std::abs(dot(f.tangent, r - f.anchor)) > f.half_extent) continue;

      const double leg_in = distance(tx.pos, r);
      const double leg_out = distance(r, rx.pos);
      const double total = leg_in + leg_out;
      const double z_r = tx.height + (leg_in / total) * (rx.height - tx.height);
      // The ray passes over a reflector shorter than itself.
      if (!(z_r < o.height)) continue;

      const Node bounce{r, z_r};
      const auto skip = static_cast<std::ptrdiff_t>(i);
      if (los_blocked(tx, bounce, map, skip) || los_blocked(bounce, rx, map, skip)) continue;

      ReflectionPath p;
      p.reflector = i;
      p.reflection_point = r;
      p.reflection_height = z_r;
      p.path_length = total;
      p.slant_length = std::hypot(total, rx.height - tx.height);
      p.delay = total / kSpeedOfLight;
      p.direct_distance = distance(tx.pos, rx.pos);
      p.incidence_angle = std::acos(std::min(1.0, d_tx / leg_in));
      p.reflection_angle = std::acos(std::min(1.0, d_rx / leg_out));
      paths.push_back(p);
    }
  }
  return paths;
}

void write_obstacles_csv(std::ostream& os, const WorldMap& map) {
  std::ostringstream buf;
  buf.precision(17);
  buf << "cx,cy,l,w,theta,h,reflector\n";
  for (const auto& o : map.obstacles()) {
    buf << o.center.x << ',' << o.center.y << ',' << o.length << ',' << o.width << ','
        << o.orientation << ',' << o.height << ',' << (o.is_reflector ? 1 : 0) << '\n';
  }
  os << buf.str();
}

std::vector<RectObstacle> read_obstacles_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("obstacle csv: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "cx,cy,l,w,theta,h,reflector") {
    throw ConfigError("obstacle csv: unexpected header '" + line + "'");
  }
  std::vector<RectObstacle> out;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    double f[7];
    std::size_t pos = 0;
    for (int k = 0; k < 7; ++k) {
      auto comma = line.find(',', pos);
      if ((k < 6) != (comma != std::string::npos)) {
        throw ConfigError("obstacle csv line " + std::to_string(line_no) + ": expected 7 fields");
      }
      auto field = std::string_view(line).substr(pos, k < 6 ? comma - pos : std::string::npos);
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), f[k]);
      if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw ConfigError("obstacle csv line " + std::to_string(line_no) + ": bad number '" +
                          std::string(field) + "'");
      }
      pos = comma + 1;
    }
    RectObstacle o;
    o.center = {f[0], f[1]};
    o.length = f[2];
    o.width = f[3];
    o.orientation = f[4];
    o.height = f[5];
    o.is_reflector = f[6] != 0.0;
    if (!(o.length > 0.0 && o.width > 0.0 && o.height > 0.0)) {
      throw ConfigError("obstacle csv line " + std::to_string(line_no) +
                        ": length, width and height must be positive");
    }
    out.push_back(o);
  }
  return out;
}

}  // namespace secsim
