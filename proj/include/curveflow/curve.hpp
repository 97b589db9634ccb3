#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "curveflow/errors.hpp"
#include "curveflow/vec2.hpp"

namespace curveflow {

inline std::size_t next_index(std::size_t i, std::size_t n) { return i + 1 == n ? 0 : i + 1; }
inline std::size_t prev_index(std::size_t i, std::size_t n) { return i == 0 ? n - 1 : i - 1; }

// Closed polygonal curve with per-segment state.  Slot s holds vertex x[s];
// segment s is the "flowing finite volume" [x[s-1], x[s]] (indices mod n) and
// carries its local length r[s], log-length eta[s] and signed curvature k[s].
//
// Invariants: r[s] == exp(eta[s]), r[s] > 0, counterclockwise orientation
// (signed area > 0).  r approximates |x[s] - x[s-1]| but is evolved by its own
// equation, so the two may drift apart slightly.
struct DiscreteCurve {
  std::vector<Vec2> x;
  std::vector<double> r;
  std::vector<double> eta;
  std::vector<double> k;
  double t = 0.0;

  std::size_t size() const { return x.size(); }
};

inline constexpr std::size_t min_curve_points = 5;

// Signed reciprocal of the circumradius of (a, b, c):
//   2 * cross(b - a, c - b) / (|b-a| |c-b| |c-a|).
// Positive for counterclockwise (locally convex) turns, zero for collinear
// points, 1/R exactly when the points lie on a circle of radius R.
inline double signed_curvature_three_point(Vec2 a, Vec2 b, Vec2 c) {
  const double lab = distance(a, b);
  const double lbc = distance(b, c);
  const double lac = distance(a, c);
  if (lab == 0.0 || lbc == 0.0 || lac == 0.0) {
    throw DegeneratePoints("signed_curvature_three_point: coincident points");
  }
  return 2.0 * cross(b - a, c - b) / (lab * lbc * lac);
}

// Analytic shape generators.  Sampling is at uniform parameter values
// u = i/n, i = 1..n, all counterclockwise.
//
// The astroid supports an optional tip rounding parameter:
//   (cos^3 p + rounding * cos p, sin^3 p + rounding * sin p) / (1 + rounding)
// rounding = 0 is the exact astroid with its four cusps; rounding > 0 caps the
// tip curvature at 3 (1 + rounding) / (rounding^2 * scale), which the solver
// needs resolved over a few grid cells to start from this shape.
struct ShapeSpec {
  enum class Kind { Circle, Ellipse, Astroid, Flower };

  Kind kind = Kind::Circle;
  int n = 100;            // sample count
  double radius = 1.0;    // circle, flower base radius
  double a = 1.0;         // ellipse half-axes
  double b = 1.0;
  double scale = 1.0;     // astroid
  double rounding = 0.0;  // astroid tip rounding (0 = exact cusps)
  double amplitude = 0.0; // flower petal depth (< radius)
  int petals = 0;

  friend bool operator==(const ShapeSpec&, const ShapeSpec&) = default;

  static ShapeSpec circle(double radius, int n) {
    ShapeSpec s;
    s.kind = Kind::Circle;
    s.radius = radius;
    s.n = n;
    return s;
  }
  static ShapeSpec ellipse(double a, double b, int n) {
    ShapeSpec s;
    s.kind = Kind::Ellipse;
    s.a = a;
    s.b = b;
    s.n = n;
    return s;
  }
  static ShapeSpec astroid(double scale, int n, double rounding = 0.0) {
    ShapeSpec s;
    s.kind = Kind::Astroid;
    s.scale = scale;
    s.rounding = rounding;
    s.n = n;
    return s;
  }
  static ShapeSpec flower(double radius, double amplitude, int petals, int n) {
    ShapeSpec s;
    s.kind = Kind::Flower;
    s.radius = radius;
    s.amplitude = amplitude;
    s.petals = petals;
    s.n = n;
    return s;
  }

  void validate() const {
    if (n < 1) throw Error("shape: sample count n must be >= 1");
    switch (kind) {
      case Kind::Circle:
        if (radius <= 0.0) throw Error("shape: circle radius must be > 0");
        break;
      case Kind::Ellipse:
        if (a <= 0.0 || b <= 0.0) throw Error("shape: ellipse half-axes must be > 0");
        break;
      case Kind::Astroid:
        if (scale <= 0.0) throw Error("shape: astroid scale must be > 0");
        if (rounding < 0.0) throw Error("shape: astroid rounding must be >= 0");
        break;
      case Kind::Flower:
        if (radius <= 0.0) throw Error("shape: flower radius must be > 0");
        if (amplitude <= 0.0) throw Error("shape: flower amplitude must be > 0");
        if (amplitude >= radius) throw Error("shape: flower amplitude must be < radius");
        if (petals < 1) throw Error("shape: flower petal count must be >= 1");
        break;
    }
  }
};

inline std::vector<Vec2> generate(const ShapeSpec& spec) {
  spec.validate();
  const std::size_t n = static_cast<std::size_t>(spec.n);
  std::vector<Vec2> pts(n);
  for (std::size_t s = 0; s < n; ++s) {
    const double u = static_cast<double>(s + 1) / static_cast<double>(n);
    const double phase = 2.0 * std::numbers::pi * u;
    const double cu = std::cos(phase);
    const double su = std::sin(phase);
    switch (spec.kind) {
      case ShapeSpec::Kind::Circle:
        pts[s] = {spec.radius * cu, spec.radius * su};
        break;
      case ShapeSpec::Kind::Ellipse:
        pts[s] = {spec.a * cu, spec.b * su};
        break;
      case ShapeSpec::Kind::Astroid: {
        const double norm = 1.0 + spec.rounding;
        pts[s] = {spec.scale * (cu * cu * cu + spec.rounding * cu) / norm,
                  spec.scale * (su * su * su + spec.rounding * su) / norm};
        break;
      }
      case ShapeSpec::Kind::Flower: {
        const double rho = spec.radius + spec.amplitude * std::cos(spec.petals * phase);
        pts[s] = {rho * cu, rho * su};
        break;
      }
    }
  }
  return pts;
}

inline double signed_area(const std::vector<Vec2>& pts) {
  double twice = 0.0;
  const std::size_t n = pts.size();
  for (std::size_t s = 0; s < n; ++s) twice += cross(pts[s], pts[next_index(s, n)]);
  return 0.5 * twice;
}

// Builds the solver state from a closed polygon.  The input is reversed if it
// is clockwise, so the result is always counterclockwise.  Segment lengths come
// from the chords, eta = ln r, and segment curvature is the mean of the
// three-point (circumradius) curvatures at its two endpoints.  The polygon is
// assumed simple; self-intersections are not detected.
inline DiscreteCurve init_from_points(std::vector<Vec2> pts) {
  const std::size_t n = pts.size();
  if (n < min_curve_points) {
    throw TooFewPoints("init_from_points: need at least " + std::to_string(min_curve_points) +
                       " points, got " + std::to_string(n));
  }
  if (signed_area(pts) < 0.0) std::reverse(pts.begin(), pts.end());

  DiscreteCurve curve;
  curve.x = std::move(pts);
  curve.r.resize(n);
  curve.eta.resize(n);
  curve.k.resize(n);

  for (std::size_t s = 0; s < n; ++s) {
    const double len = distance(curve.x[s], curve.x[prev_index(s, n)]);
    if (len == 0.0) {
      throw DegenerateSegment("init_from_points: zero-length segment at index " + std::to_string(s));
    }
    curve.r[s] = len;
    curve.eta[s] = std::log(len);
  }

  // curvature at each vertex, then averaged onto the adjacent segment midpoints
  std::vector<double> vertex_k(n);
  for (std::size_t s = 0; s < n; ++s) {
    vertex_k[s] = signed_curvature_three_point(curve.x[prev_index(s, n)], curve.x[s],
                                               curve.x[next_index(s, n)]);
  }
  for (std::size_t s = 0; s < n; ++s) {
    curve.k[s] = 0.5 * (vertex_k[prev_index(s, n)] + vertex_k[s]);
  }
  curve.t = 0.0;
  return curve;
}

struct CurveMeasures {
  double area = 0.0;            // shoelace area of the vertex polygon
  double polygon_length = 0.0;  // sum of chord lengths
  double r_length = 0.0;        // sum of the evolved local lengths r
};

inline CurveMeasures area_and_length(const DiscreteCurve& curve) {
  CurveMeasures m;
  const std::size_t n = curve.size();
  m.area = signed_area(curve.x);
  for (std::size_t s = 0; s < n; ++s) {
    m.polygon_length += distance(curve.x[s], curve.x[prev_index(s, n)]);
    m.r_length += curve.r[s];
  }
  return m;
}

// max r / min r; 1 for a perfectly uniform grid.
inline double uniformity_ratio(const DiscreteCurve& curve) {
  const auto [lo, hi] = std::minmax_element(curve.r.begin(), curve.r.end());
  return *hi / *lo;
}

// L^2 / (4 pi A) of the vertex polygon; >= 1, equal to 1 only for circles.
inline double isoperimetric_ratio(const DiscreteCurve& curve) {
  const CurveMeasures m = area_and_length(curve);
  return m.polygon_length * m.polygon_length / (4.0 * std::numbers::pi * m.area);
}

// Mean distance of the vertices from their centroid.
inline double mean_vertex_radius(const DiscreteCurve& curve) {
  Vec2 centroid{0.0, 0.0};
  for (const Vec2& p : curve.x) centroid += p;
  centroid = centroid / static_cast<double>(curve.size());
  double mean = 0.0;
  for (const Vec2& p : curve.x) mean += distance(p, centroid);
  return mean / static_cast<double>(curve.size());
}

}  // namespace curveflow
