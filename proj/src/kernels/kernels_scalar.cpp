#include <cmath>
#include <limits>

#include "secsim/kernels.hpp"

namespace secsim::kernels {

void ObstacleSoA::reserve(std::size_t n) {
  for (auto* v : {&cx, &cy, &cos_t, &sin_t, &half_len, &half_wid, &height}) v->reserve(n + kLanes);
}

void ObstacleSoA::push_back(double x, double y, double theta, double length, double width,
                            double h) {
  // Must be called before finalize(); padding lives at the tail.
  cx.push_back(x);
  cy.push_back(y);
  cos_t.push_back(std::cos(theta));
  sin_t.push_back(std::sin(theta));
  half_len.push_back(0.5 * length);
  half_wid.push_back(0.5 * width);
  height.push_back(h);
  ++count;
}

void ObstacleSoA::finalize() {
  while (cx.size() % kLanes != 0) {
    cx.push_back(0.0);
    cy.push_back(0.0);
    cos_t.push_back(1.0);
    sin_t.push_back(0.0);
    half_len.push_back(0.0);
    half_wid.push_back(0.0);
    height.push_back(-std::numeric_limits<double>::infinity());
  }
}

namespace {

// Same operand order as MINPD / MAXPD: the second operand wins on NaN.
inline double vmin(double a, double b) { return a < b ? a : b; }
inline double vmax(double a, double b) { return a > b ? a : b; }

}  // namespace

bool segment_blocked_scalar(const ObstacleSoA& obs, const Segment3& seg, std::ptrdiff_t skip) {
  const double dx = seg.bx - seg.ax;
  const double dy = seg.by - seg.ay;
  const double dz = seg.bz - seg.az;
  const std::size_t n = obs.padded_size();
  for (std::size_t i = 0; i < n; ++i) {
    if (static_cast<std::ptrdiff_t>(i) == skip) continue;
    const double rx = seg.ax - obs.cx[i];
    const double ry = seg.ay - obs.cy[i];
    const double c = obs.cos_t[i];
    const double s = obs.sin_t[i];

    // Segment in the obstacle's frame: u along the length, v along the width.
    const double p0u = rx * c + ry * s;
    const double du = dx * c + dy * s;
    const double p0v = ry * c - rx * s;
    const double dv = dy * c - dx * s;

    const double hl = obs.half_len[i];
    const double hw = obs.half_wid[i];
    const double t1u = (-hl - p0u) / du;
    const double t2u = (hl - p0u) / du;
    const double t1v = (-hw - p0v) / dv;
    const double t2v = (hw - p0v) / dv;

    const double s_in = vmax(vmax(0.0, vmin(t1u, t2u)), vmin(t1v, t2v));
    const double s_out = vmin(vmin(1.0, vmax(t1u, t2u)), vmax(t1v, t2v));
    const bool crosses = s_in <= s_out;

    const double z_in = seg.az + s_in * dz;
    const double z_out = seg.az + s_out * dz;
    const double z_low = vmin(z_in, z_out);
    if (crosses && obs.height[i] > z_low) return true;
  }
  return false;
}

std::size_t count_above_scalar(std::span<const double> samples, double threshold) {
  std::size_t n = 0;
  for (double x : samples) n += (x > threshold) ? 1 : 0;
  return n;
}

}  // namespace secsim::kernels
