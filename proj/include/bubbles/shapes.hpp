#pragma once

// Analytic seed geometries: the exact standard double bubble construction,
// icosphere meshing, seed meshes for all supported cluster topologies, and an
// adaptive-quadrature oracle for weighted areas of exact cap geometries.

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "bubbles/constraint.hpp"
#include "bubbles/core.hpp"
#include "bubbles/density.hpp"
#include "bubbles/mesh.hpp"

namespace bubbles {

enum class Topology { Single, Double, Triple, Chain3 };

inline const char* topology_name(Topology t) {
  switch (t) {
    case Topology::Single: return "single";
    case Topology::Double: return "double";
    case Topology::Triple: return "triple";
    case Topology::Chain3: return "chain3";
  }
  return "?";
}

inline Topology topology_from_string(const std::string& s) {
  if (s == "single") return Topology::Single;
  if (s == "double") return Topology::Double;
  if (s == "triple") return Topology::Triple;
  if (s == "chain3" || s == "chain") return Topology::Chain3;
  fail(Errc::unsupported_topology, "unknown topology '" + s + "'");
}

inline std::size_t region_count(Topology t) {
  switch (t) {
    case Topology::Single: return 1;
    case Topology::Double: return 2;
    case Topology::Triple: return 3;
    case Topology::Chain3: return 3;
  }
  return 0;
}

// Declarative scenario seed: what to build and where to put it.
struct BubbleSpec {
  Topology topology = Topology::Single;
  std::vector<double> volumes;       // target weighted volumes, one per region
  double p = 0.0;                    // density exponent
  double epsilon = 0.0;              // density regularization (p < 1 runs)
  RigidTransform placement{};        // applied on top of the canonical pose
  int refinement_level = 2;          // initial subdivision count
  double seed_jitter = 0.0;          // vertex jitter, fraction of seed diameter
};

inline void validate_spec(const BubbleSpec& spec) {
  if (spec.volumes.size() != region_count(spec.topology))
    fail(Errc::invalid_parameter, "volume count does not match topology");
  for (double v : spec.volumes)
    if (!(v > 0)) fail(Errc::invalid_parameter, "target volumes must be positive");
  if (!(spec.p >= 0)) fail(Errc::invalid_parameter, "p must be >= 0");
  if (!(spec.epsilon >= 0)) fail(Errc::invalid_parameter, "epsilon must be >= 0");
  if (spec.refinement_level < 0 || spec.refinement_level > 7)
    fail(Errc::invalid_parameter, "refinement_level out of range [0,7]");
  if (!(spec.seed_jitter >= 0 && spec.seed_jitter <= 0.2))
    fail(Errc::invalid_parameter, "seed_jitter must lie in [0, 0.2]");
}

// ---------------------------------------------------------------------------
// Exact standard double bubble.
//
// Local frame: sphere 1 centered at the origin, sphere 2 at (d, 0, 0).
// The junction radii of the two spheres meet at 60 degrees at any point of
// the intersection circle: the three films meet at 120-degree dihedrals, and
// the angle between the two cap normals there is 180 - 120 = 60 degrees; the
// radii are parallel to those normals. The law of cosines then gives the
// center separation d^2 = r1^2 + r2^2 - 2 r1 r2 cos(60) = r1^2 + r2^2 - r1 r2.

struct DoubleBubbleGeometry {
  double r1 = 1, r2 = 1;
  double center_distance = 1;
  bool flat = true;            // equal radii: the middle interface is a disk
  double bulge_radius = 0;     // 1 / |1/r1 - 1/r2| when not flat
  double bulge_center_x = 0;   // bulge sphere center on the axis (when not flat)
  double bulge_side = 0;       // +1 when r1 > r2 (bulge apex pokes into bubble 1)
  double plane_x = 0;          // junction circle plane
  double circle_radius = 0;    // junction circle radius
  double cap1_polar = 0;       // rim polar angle about +x seen from center 1
  double cap2_polar = 0;       // rim polar angle about +x seen from center 2
};

inline DoubleBubbleGeometry double_bubble_geometry(double r1, double r2) {
  if (!(r1 > 0) || !(r2 > 0)) fail(Errc::invalid_parameter, "cap radii must be positive");
  DoubleBubbleGeometry g;
  g.r1 = r1;
  g.r2 = r2;
  double d = std::sqrt(r1 * r1 + r2 * r2 - r1 * r2);
  g.center_distance = d;
  g.plane_x = (d * d + r1 * r1 - r2 * r2) / (2 * d);
  double rho2 = r1 * r1 - g.plane_x * g.plane_x;
  g.circle_radius = std::sqrt(std::max(rho2, 0.0));
  g.cap1_polar = std::acos(std::clamp(g.plane_x / r1, -1.0, 1.0));
  g.cap2_polar = std::acos(std::clamp((g.plane_x - d) / r2, -1.0, 1.0));
  g.flat = (r1 == r2);
  if (!g.flat) {
    g.bulge_radius = 1.0 / std::abs(1.0 / r1 - 1.0 / r2);
    g.bulge_side = r1 > r2 ? 1.0 : -1.0;
    double off2 = g.bulge_radius * g.bulge_radius - g.circle_radius * g.circle_radius;
    // The bulge sphere contains the junction circle, placed beyond the plane
    // on the smaller bubble's side so its apex pokes into the larger bubble.
    g.bulge_center_x = g.plane_x + g.bulge_side * std::sqrt(std::max(off2, 0.0));
  }
  return g;
}

// Dihedral angles between the three interfaces along the junction circle,
// computed from the cross-section tangents. All three are 120 degrees for
// every (r1, r2) by construction.
inline std::array<double, 3> junction_dihedral_angles(const DoubleBubbleGeometry& g) {
  struct V2 {
    double x, y;
  };
  auto angle2 = [](V2 u, V2 v) {
    double crossz = u.x * v.y - u.y * v.x;
    double d = u.x * v.x + u.y * v.y;
    return std::atan2(std::abs(crossz), d);
  };
  double rho = g.circle_radius;
  V2 t1{-rho / g.r1, g.plane_x / g.r1};
  V2 t2{rho / g.r2, (g.center_distance - g.plane_x) / g.r2};
  V2 t3{0, -1};
  if (!g.flat) {
    double r3 = g.bulge_radius;
    double cx = (g.plane_x - g.bulge_center_x) / r3;
    if (g.bulge_side > 0)
      t3 = V2{-rho / r3, cx};
    else
      t3 = V2{rho / r3, -cx};
  }
  return {angle2(t1, t3), angle2(t3, t2), angle2(t1, t2)};
}

// ---------------------------------------------------------------------------
// Closed forms for spheres under density r^p (used as test oracles and for
// picking seed radii).

// Sphere of radius R passing through the origin.
inline double sphere_through_origin_weighted_area(double R, double p) {
  return M_PI * std::pow(2.0, p + 3.0) * std::pow(R, p + 2.0) / (p + 2.0);
}
inline double sphere_through_origin_weighted_volume(double R, double p) {
  return 2.0 * M_PI * std::pow(2.0 * R, p + 3.0) / ((p + 3.0) * (p + 4.0));
}
inline double sphere_radius_for_weighted_volume(double V, double p) {
  return 0.5 * std::pow(V * (p + 3.0) * (p + 4.0) / (2.0 * M_PI), 1.0 / (p + 3.0));
}

// Sphere of radius R centered at the origin.
inline double centered_sphere_weighted_area(double R, double p) {
  return 4.0 * M_PI * std::pow(R, p + 2.0);
}
inline double centered_sphere_weighted_volume(double R, double p) {
  return 4.0 * M_PI * std::pow(R, p + 3.0) / (p + 3.0);
}

// ---------------------------------------------------------------------------
// Mesh building blocks

namespace meshgen {

struct Builder {
  std::vector<Vec3> positions;
  std::vector<Facet> facets;

  VertexId vertex(const Vec3& p) {
    positions.push_back(p);
    return VertexId(positions.size() - 1);
  }

  // Adds a triangle whose right-hand normal is aligned with `hint`; silently
  // drops index-degenerate triangles (they arise at zipper pole seams).
  void tri(VertexId a, VertexId b, VertexId c, RegionId back, RegionId front,
           const Vec3& hint) {
    if (a == b || b == c || a == c) return;
    Vec3 n = cross(positions[b] - positions[a], positions[c] - positions[a]);
    if (dot(n, hint) < 0) std::swap(b, c);
    facets.push_back({{a, b, c}, back, front});
  }
};

using HintFn = std::function<Vec3(const Vec3&)>;

inline void tri_hinted(Builder& bld, VertexId a, VertexId b, VertexId c, RegionId back,
                       RegionId front, const HintFn& hint) {
  Vec3 centroid = (bld.positions[a] + bld.positions[b] + bld.positions[c]) / 3.0;
  bld.tri(a, b, c, back, front, hint(centroid));
}

// Circle of n vertices: center + radius * (cos(2 pi k/n) e1 + sin(2 pi k/n) e2).
inline std::vector<VertexId> make_ring(Builder& bld, const Vec3& center, double radius,
                                       const Vec3& e1, const Vec3& e2, int n) {
  std::vector<VertexId> ids;
  ids.reserve(n);
  for (int k = 0; k < n; ++k) {
    double phi = 2.0 * M_PI * k / n;
    ids.push_back(bld.vertex(center + radius * (std::cos(phi) * e1 + std::sin(phi) * e2)));
  }
  return ids;
}

// Stitch two concentric closed loops (any sizes) with a parameter-merging
// zipper. Both loops must start at the same azimuth and wind the same way.
inline void zip_loops(Builder& bld, const std::vector<VertexId>& a,
                      const std::vector<VertexId>& b, RegionId back, RegionId front,
                      const HintFn& hint) {
  std::size_t na = a.size(), nb = b.size(), ia = 0, ib = 0;
  while (ia < na || ib < nb) {
    double ua = ia < na ? double(ia + 1) / na : 2.0;
    double ub = ib < nb ? double(ib + 1) / nb : 2.0;
    if (ua <= ub) {
      tri_hinted(bld, a[ia % na], a[(ia + 1) % na], b[ib % nb], back, front, hint);
      ++ia;
    } else {
      tri_hinted(bld, a[ia % na], b[(ib + 1) % nb], b[ib % nb], back, front, hint);
      ++ib;
    }
  }
}

// Stitch two open polylines (sharing endpoints is fine; degenerate triangles
// at shared points are dropped by Builder::tri).
inline void zip_open(Builder& bld, const std::vector<VertexId>& a,
                     const std::vector<VertexId>& b, RegionId back, RegionId front,
                     const HintFn& hint) {
  std::size_t na = a.size() - 1, nb = b.size() - 1, ia = 0, ib = 0;
  while (ia < na || ib < nb) {
    double ua = ia < na ? double(ia + 1) / std::max<std::size_t>(na, 1) : 2.0;
    double ub = ib < nb ? double(ib + 1) / std::max<std::size_t>(nb, 1) : 2.0;
    if (ua <= ub) {
      tri_hinted(bld, a[ia], a[ia + 1], b[ib], back, front, hint);
      ++ia;
    } else {
      tri_hinted(bld, a[ia], b[ib + 1], b[ib], back, front, hint);
      ++ib;
    }
  }
}

inline void fan(Builder& bld, const std::vector<VertexId>& ring, VertexId apex, RegionId back,
                RegionId front, const HintFn& hint) {
  for (std::size_t i = 0; i < ring.size(); ++i)
    tri_hinted(bld, ring[i], ring[(i + 1) % ring.size()], apex, back, front, hint);
}

// Ring-spacing grading: compresses parameter steps near both ends (u = 0 and
// u = 1) to `grade` times the uniform step. Junction rims carry the cluster's
// singular curves, so the adjacent rings sit closer to keep the discrete
// dihedral angles faithful.
inline double graded(double u, double grade) {
  return grade * u + (1.0 - grade) * (3.0 * u * u - 2.0 * u * u * u);
}

inline constexpr double kRimGrade = 0.3;

// Spherical cap from an existing rim ring up to the apex. The rim ring must
// have been generated in the frame (e1, e2) about the same sphere: rim point
// k sits at azimuth 2 pi k / rim.size().
//
// theta_rim is the rim's polar angle measured from the apex axis.
inline void mesh_cap(Builder& bld, const Vec3& center, double radius, const Vec3& apex_axis,
                     const Vec3& e1, const Vec3& e2, double theta_rim,
                     const std::vector<VertexId>& rim, RegionId back, RegionId front,
                     const HintFn& hint, double target_h) {
  int n_ref = int(rim.size());
  int rings = std::max(1, int(std::lround(theta_rim * radius / target_h)));
  std::vector<VertexId> prev = rim;
  for (int m = 1; m < rings; ++m) {
    double theta = theta_rim * (1.0 - graded(double(m) / rings, kRimGrade));
    // The ring next to the rim keeps the rim's count so junction wings sit
    // straight above the singular curve.
    int n = m == 1 ? n_ref
                   : std::clamp(int(std::lround(2.0 * M_PI * radius * std::sin(theta) / target_h)),
                                6, 8 * n_ref);
    Vec3 ring_center = center + radius * std::cos(theta) * apex_axis;
    std::vector<VertexId> ring =
        make_ring(bld, ring_center, radius * std::sin(theta), e1, e2, n);
    zip_loops(bld, prev, ring, back, front, hint);
    prev = ring;
  }
  VertexId apex = bld.vertex(center + radius * apex_axis);
  fan(bld, prev, apex, back, front, hint);
}

// Flat disk spanned by an existing rim ring.
inline void mesh_disk(Builder& bld, const Vec3& center, double radius, const Vec3& e1,
                      const Vec3& e2, const std::vector<VertexId>& rim, RegionId back,
                      RegionId front, const HintFn& hint, double target_h) {
  int n_ref = int(rim.size());
  int rings = std::max(1, int(std::lround(radius / target_h)));
  std::vector<VertexId> prev = rim;
  for (int m = 1; m < rings; ++m) {
    double r = radius * (1.0 - graded(double(m) / rings, kRimGrade));
    int n = m == 1 ? n_ref
                   : std::clamp(int(std::lround(2.0 * M_PI * r / target_h)), 6, 8 * n_ref);
    std::vector<VertexId> ring = make_ring(bld, center, r, e1, e2, n);
    zip_loops(bld, prev, ring, back, front, hint);
    prev = ring;
  }
  VertexId c = bld.vertex(center);
  fan(bld, prev, c, back, front, hint);
}

// Spherical zone between two existing rims at polar angles theta_a < theta_b
// about the given axis.
inline void mesh_zone(Builder& bld, const Vec3& center, double radius, const Vec3& axis,
                      const Vec3& e1, const Vec3& e2, double theta_a,
                      const std::vector<VertexId>& rim_a, double theta_b,
                      const std::vector<VertexId>& rim_b, RegionId back, RegionId front,
                      const HintFn& hint, double target_h) {
  int n_ref = int(std::max(rim_a.size(), rim_b.size()));
  int rings = std::max(1, int(std::lround((theta_b - theta_a) * radius / target_h)));
  std::vector<VertexId> prev = rim_a;
  for (int m = 1; m < rings; ++m) {
    double theta = theta_a + (theta_b - theta_a) * graded(double(m) / rings, kRimGrade);
    int n;
    if (m == 1)
      n = int(rim_a.size());
    else if (m == rings - 1)
      n = int(rim_b.size());
    else
      n = std::clamp(int(std::lround(2.0 * M_PI * radius * std::sin(theta) / target_h)), 6,
                     8 * n_ref);
    Vec3 ring_center = center + radius * std::cos(theta) * axis;
    std::vector<VertexId> ring =
        make_ring(bld, ring_center, radius * std::sin(theta), e1, e2, n);
    zip_loops(bld, prev, ring, back, front, hint);
    prev = ring;
  }
  zip_loops(bld, prev, rim_b, back, front, hint);
}

}  // namespace meshgen

// ---------------------------------------------------------------------------
// Icosphere (subdivided icosahedron); facets oriented inward per the region
// labeling convention (exterior is region 0).

inline ClusterMesh icosphere(const Vec3& center, double radius, int level, RegionId region = 1,
                             double target_volume = 1.0) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> verts = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0},
                             {0, -1, t}, {0, 1, t},  {0, -1, -t}, {0, 1, -t},
                             {t, 0, -1}, {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
  for (Vec3& v : verts) v = normalized(v);
  std::vector<std::array<VertexId, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

  for (int l = 0; l < level; ++l) {
    std::map<std::pair<VertexId, VertexId>, VertexId> midpoint;
    auto mid = [&](VertexId a, VertexId b) {
      auto key = std::minmax(a, b);
      auto it = midpoint.find({key.first, key.second});
      if (it != midpoint.end()) return it->second;
      Vec3 m = normalized(0.5 * (verts[a] + verts[b]));
      verts.push_back(m);
      VertexId id = VertexId(verts.size() - 1);
      midpoint[{key.first, key.second}] = id;
      return id;
    };
    std::vector<std::array<VertexId, 3>> next;
    next.reserve(faces.size() * 4);
    for (auto& f : faces) {
      VertexId ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces = std::move(next);
  }

  meshgen::Builder bld;
  for (const Vec3& v : verts) bld.vertex(center + radius * v);
  for (auto& f : faces) {
    Vec3 centroid = (bld.positions[f[0]] + bld.positions[f[1]] + bld.positions[f[2]]) / 3.0;
    bld.tri(f[0], f[1], f[2], kExterior, region, center - centroid);
  }
  return build_cluster_mesh(std::move(bld.positions), std::move(bld.facets),
                            {{region, target_volume}});
}

// ---------------------------------------------------------------------------
// Double bubble and chain meshes (surfaces of revolution about +x).

namespace detail_shapes {

// Middle interface of a junction; falls back to a flat disk when the bulge
// radius is numerically enormous (nearly equal cap radii).
inline void mesh_junction_interface(meshgen::Builder& bld, const DoubleBubbleGeometry& g,
                                    double x_offset, const std::vector<VertexId>& rim,
                                    RegionId back, RegionId front, double target_h) {
  Vec3 ey{0, 1, 0}, ez{0, 0, 1};
  Vec3 plane_center{x_offset + g.plane_x, 0, 0};
  bool treat_flat = g.flat || g.bulge_radius > 1e7 * g.circle_radius;
  if (treat_flat) {
    meshgen::mesh_disk(bld, plane_center, g.circle_radius, ey, ez, rim, back, front,
                       [](const Vec3&) { return Vec3{1, 0, 0}; }, target_h);
    return;
  }
  double s = g.bulge_side;
  Vec3 bulge_center{x_offset + g.bulge_center_x, 0, 0};
  Vec3 apex_axis{-s, 0, 0};
  double theta_rim = std::asin(std::clamp(g.circle_radius / g.bulge_radius, 0.0, 1.0));
  meshgen::mesh_cap(bld, bulge_center, g.bulge_radius, apex_axis, ey, ez, theta_rim, rim, back,
                    front, [=](const Vec3& c) { return s * (bulge_center - c); }, target_h);
}

}  // namespace detail_shapes

// Standard double bubble mesh in the local frame (centers on the x axis,
// sphere 1 at the origin). Region 1 is the r1 bubble, region 2 the r2 bubble.
inline ClusterMesh double_bubble_mesh(const DoubleBubbleGeometry& g, int level,
                                      double target_v1 = 1.0, double target_v2 = 1.0) {
  meshgen::Builder bld;
  Vec3 ey{0, 1, 0}, ez{0, 0, 1};
  int n = 6 << level;
  double target_h = 2.0 * M_PI * g.circle_radius / n;

  std::vector<VertexId> rim =
      meshgen::make_ring(bld, Vec3{g.plane_x, 0, 0}, g.circle_radius, ey, ez, n);

  Vec3 c1{0, 0, 0}, c2{g.center_distance, 0, 0};
  meshgen::mesh_cap(bld, c1, g.r1, Vec3{-1, 0, 0}, ey, ez, M_PI - g.cap1_polar, rim, kExterior,
                    1, [=](const Vec3& c) { return c1 - c; }, target_h);
  meshgen::mesh_cap(bld, c2, g.r2, Vec3{1, 0, 0}, ey, ez, g.cap2_polar, rim, kExterior, 2,
                    [=](const Vec3& c) { return c2 - c; }, target_h);
  detail_shapes::mesh_junction_interface(bld, g, 0.0, rim, 1, 2, target_h);

  return build_cluster_mesh(std::move(bld.positions), std::move(bld.facets),
                            {{1, target_v1}, {2, target_v2}});
}

// Linear chain of three bubbles along +x in list order.
inline ClusterMesh chain3_mesh(double r1, double r2, double r3, int level,
                               const std::array<double, 3>& targets) {
  DoubleBubbleGeometry g12 = double_bubble_geometry(r1, r2);
  DoubleBubbleGeometry g23 = double_bubble_geometry(r2, r3);
  double c2x = g12.center_distance;
  double c3x = c2x + g23.center_distance;

  // Zone of the middle sphere between the two junction rims (polar angles
  // about +x measured at center 2).
  double theta_23 = g23.cap1_polar;
  double theta_12 = g12.cap2_polar;
  if (!(theta_23 < theta_12))
    fail(Errc::unsupported_topology, "chain junction planes cross inside the middle bubble");
  if (!(c3x > r1 + r3))
    fail(Errc::unsupported_topology, "chain end bubbles overlap");

  meshgen::Builder bld;
  Vec3 ey{0, 1, 0}, ez{0, 0, 1};
  int n = 6 << level;
  // Each junction carries its own length scale; sizing the small end by the
  // big junction would leave it mesh-starved.
  double h12 = 2.0 * M_PI * g12.circle_radius / n;
  double h23 = 2.0 * M_PI * g23.circle_radius / n;

  std::vector<VertexId> rim12 =
      meshgen::make_ring(bld, Vec3{g12.plane_x, 0, 0}, g12.circle_radius, ey, ez, n);
  std::vector<VertexId> rim23 =
      meshgen::make_ring(bld, Vec3{c2x + g23.plane_x, 0, 0}, g23.circle_radius, ey, ez, n);

  Vec3 c1{0, 0, 0}, c2{c2x, 0, 0}, c3{c3x, 0, 0};
  meshgen::mesh_cap(bld, c1, r1, Vec3{-1, 0, 0}, ey, ez, M_PI - g12.cap1_polar, rim12,
                    kExterior, 1, [=](const Vec3& c) { return c1 - c; }, h12);
  detail_shapes::mesh_junction_interface(bld, g12, 0.0, rim12, 1, 2, h12);
  meshgen::mesh_zone(bld, c2, r2, Vec3{1, 0, 0}, ey, ez, theta_23, rim23, theta_12, rim12,
                     kExterior, 2, [=](const Vec3& c) { return c2 - c; }, std::min(h12, h23));
  detail_shapes::mesh_junction_interface(bld, g23, c2x, rim23, 2, 3, h23);
  meshgen::mesh_cap(bld, c3, r3, Vec3{1, 0, 0}, ey, ez, g23.cap2_polar, rim23, kExterior, 3,
                    [=](const Vec3& c) { return c3 - c; }, h23);

  return build_cluster_mesh(std::move(bld.positions), std::move(bld.facets),
                            {{1, targets[0]}, {2, targets[1]}, {3, targets[2]}});
}

// ---------------------------------------------------------------------------
// Triple bubble seed: three spheres all passing through the two common points
// T = (0,0,h) and B = (0,0,-h). Every pairwise radical plane then contains
// the z axis, so the three interfaces are flat "pages" hinged on the central
// segment TB, the seed has exactly two singular vertices (T and B), and the
// combinatorial structure matches the standard triple bubble for any radii.

namespace detail_shapes {

struct TripleFrame {
  std::array<double, 3> r{};      // sphere radii
  double h = 0;                   // common points at z = +-h
  std::array<double, 3> s{};      // horizontal center distances
  std::array<Vec3, 3> center{};
  std::array<double, 3> pair_phi{};        // boundary azimuth per pair (01, 02, 12)
  std::array<double, 3> sector_start{};    // per region
  std::array<double, 3> sector_width{};
  std::array<int, 3> start_pair{}, end_pair{};  // pair index bounding each sector
};

inline int pair_index(int i, int j) {
  if (i > j) std::swap(i, j);
  if (i == 0 && j == 1) return 0;
  if (i == 0 && j == 2) return 1;
  return 2;
}

inline double wrap_2pi(double a) {
  a = std::fmod(a, 2.0 * M_PI);
  return a < 0 ? a + 2.0 * M_PI : a;
}

inline TripleFrame compute_triple_frame(const std::array<double, 3>& radii, double h,
                                        const std::array<double, 3>& theta) {
  TripleFrame f;
  f.r = radii;
  f.h = h;
  for (int i = 0; i < 3; ++i) {
    if (!(radii[i] > h))
      fail(Errc::unsupported_topology, "triple seed requires every radius > h");
    f.s[i] = std::sqrt(radii[i] * radii[i] - h * h);
    f.center[i] = Vec3{f.s[i] * std::cos(theta[i]), f.s[i] * std::sin(theta[i]), 0};
  }

  auto winner = [&](double phi) {
    double cx = std::cos(phi), sy = std::sin(phi);
    int best = 0;
    double bestdot = -1e300;
    for (int i = 0; i < 3; ++i) {
      double d = cx * f.center[i].x + sy * f.center[i].y;
      if (d > bestdot) {
        bestdot = d;
        best = i;
      }
    }
    return best;
  };

  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      double ax = f.center[i].x - f.center[j].x, ay = f.center[i].y - f.center[j].y;
      double phi = std::atan2(-ax, ay);
      double w = std::cos(phi) * f.center[i].x + std::sin(phi) * f.center[i].y;
      if (w < 0) phi += M_PI;
      f.pair_phi[pair_index(i, j)] = wrap_2pi(phi);
    }

  for (int i = 0; i < 3; ++i) {
    int j = (i + 1) % 3, k = (i + 2) % 3;
    int p1 = pair_index(i, j), p2 = pair_index(i, k);
    double b1 = f.pair_phi[p1], b2 = f.pair_phi[p2];
    double w12 = wrap_2pi(b2 - b1);
    if (winner(b1 + 0.5 * w12) == i) {
      f.sector_start[i] = b1;
      f.sector_width[i] = w12;
      f.start_pair[i] = p1;
      f.end_pair[i] = p2;
    } else {
      f.sector_start[i] = b2;
      f.sector_width[i] = wrap_2pi(b1 - b2);
      f.start_pair[i] = p2;
      f.end_pair[i] = p1;
    }
    if (!(f.sector_width[i] > 1e-6) || winner(f.sector_start[i] + 0.5 * f.sector_width[i]) != i)
      fail(Errc::unsupported_topology, "degenerate azimuthal sector in triple seed");
  }
  return f;
}

// Arc of sphere `i` cut by the vertical half-plane at azimuth phi, sampled
// from T to B (the far side, xi > 0). Returns M+1 points; the first and last
// equal T and B analytically.
inline std::vector<Vec3> halfplane_arc(const TripleFrame& f, int i, double phi, int segments) {
  Vec3 u{std::cos(phi), std::sin(phi), 0};
  double xi_c = dot(f.center[i], u);
  if (!(xi_c > 0))
    fail(Errc::unsupported_topology, "half-plane arc on the wrong side of the axis");
  double rc = std::sqrt(f.h * f.h + xi_c * xi_c);
  double beta_t = std::atan2(f.h, -xi_c);
  std::vector<Vec3> pts;
  pts.reserve(segments + 1);
  for (int m = 0; m <= segments; ++m) {
    double beta = beta_t * (1.0 - 2.0 * meshgen::graded(double(m) / segments, meshgen::kRimGrade));
    pts.push_back((xi_c + rc * std::cos(beta)) * u + Vec3{0, 0, rc * std::sin(beta)});
  }
  return pts;
}

}  // namespace detail_shapes

inline ClusterMesh triple_mesh(const std::array<double, 3>& radii, double h,
                               const std::array<double, 3>& theta, int level,
                               const std::array<double, 3>& targets) {
  using namespace detail_shapes;
  TripleFrame frame = compute_triple_frame(radii, h, theta);

  meshgen::Builder bld;
  int m_rows = 4 << level;
  double r_max = std::max({radii[0], radii[1], radii[2]});
  double target_h = M_PI * r_max / m_rows;

  VertexId vT = bld.vertex(Vec3{0, 0, h});
  VertexId vB = bld.vertex(Vec3{0, 0, -h});

  // Central chord shared by the three interfaces; the same row grading as
  // the arcs keeps the interface rows roughly horizontal.
  std::vector<VertexId> chord(m_rows + 1);
  chord[0] = vT;
  chord[m_rows] = vB;
  for (int m = 1; m < m_rows; ++m) {
    double zfrac = 1.0 - 2.0 * meshgen::graded(double(m) / m_rows, meshgen::kRimGrade);
    chord[m] = bld.vertex(Vec3{0, 0, h * zfrac});
  }

  // Junction arcs, one per region pair, shared by two sphere pieces and one
  // interface.
  std::array<std::vector<VertexId>, 3> arc_ids;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      int p = pair_index(i, j);
      std::vector<Vec3> pts = halfplane_arc(frame, i, frame.pair_phi[p], m_rows);
      std::vector<VertexId>& ids = arc_ids[p];
      ids.resize(m_rows + 1);
      ids[0] = vT;
      ids[m_rows] = vB;
      for (int m = 1; m < m_rows; ++m) ids[m] = bld.vertex(pts[m]);
    }

  // Sphere pieces: columns of half-plane arcs swept across each sector.
  for (int i = 0; i < 3; ++i) {
    double width = frame.sector_width[i];
    int cols = std::max(3, int(std::lround(width * radii[i] / target_h)));
    RegionId region = RegionId(i + 1);
    Vec3 ci = frame.center[i];
    auto hint = [ci](const Vec3& c) { return ci - c; };

    std::vector<VertexId> prev = arc_ids[frame.start_pair[i]];
    for (int t = 1; t <= cols; ++t) {
      std::vector<VertexId> col;
      if (t == cols) {
        col = arc_ids[frame.end_pair[i]];
      } else {
        double phi =
            frame.sector_start[i] + width * meshgen::graded(double(t) / cols, meshgen::kRimGrade);
        std::vector<Vec3> pts = halfplane_arc(frame, i, phi, m_rows);
        col.resize(m_rows + 1);
        col[0] = vT;
        col[m_rows] = vB;
        for (int m = 1; m < m_rows; ++m) col[m] = bld.vertex(pts[m]);
      }
      meshgen::zip_open(bld, prev, col, kExterior, region, hint);
      prev = col;
    }
  }

  // Flat interfaces: rows from the central chord out to the junction arc.
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      int p = pair_index(i, j);
      Vec3 u{std::cos(frame.pair_phi[p]), std::sin(frame.pair_phi[p]), 0};
      Vec3 normal = cross(Vec3{0, 0, 1}, u);
      if (dot(normal, frame.center[j] - frame.center[i]) < 0) normal = -normal;
      auto hint = [normal](const Vec3&) { return normal; };

      std::vector<std::vector<VertexId>> rows(m_rows + 1);
      for (int m = 0; m <= m_rows; ++m) {
        Vec3 q = bld.positions[chord[m]];
        Vec3 pt = bld.positions[arc_ids[p][m]];
        double len = distance(q, pt);
        int w = std::max(1, int(std::lround(len / target_h)));
        rows[m].push_back(chord[m]);
        for (int k = 1; k < w; ++k)
          rows[m].push_back(
              bld.vertex(q + (pt - q) * meshgen::graded(double(k) / w, meshgen::kRimGrade)));
        if (arc_ids[p][m] != chord[m]) rows[m].push_back(arc_ids[p][m]);
      }
      for (int m = 0; m < m_rows; ++m)
        meshgen::zip_open(bld, rows[m], rows[m + 1], RegionId(i + 1), RegionId(j + 1), hint);
    }

  return build_cluster_mesh(std::move(bld.positions), std::move(bld.facets),
                            {{1, targets[0]}, {2, targets[1]}, {3, targets[2]}});
}

// ---------------------------------------------------------------------------
// Seed meshes with volume fitting. Radii are tuned by a fixed-point loop so
// each region's weighted volume lands within a few percent of its target
// under the final placement; project_volumes then pins them exactly.

namespace detail_shapes {

inline void apply_transform(ClusterMesh& mesh, const RigidTransform& t) {
  for (Vec3& p : mesh.positions) p = t.apply(p);
  rebuild_edges(mesh);
}

template <class BuildFn>
inline ClusterMesh fit_seed_volumes(const BubbleSpec& spec, std::vector<double>& radii,
                                    BuildFn&& build) {
  Density f(spec.p, spec.epsilon);
  const std::size_t k = radii.size();
  ClusterMesh mesh;

  auto measure = [&](const std::vector<double>& r, ClusterMesh* out) {
    ClusterMesh m = build(r);
    std::vector<double> vols = weighted_region_volumes(m, f);
    for (double v : vols)
      if (!(v > 0)) fail(Errc::no_convergence, "seed region volume not positive");
    if (out) *out = std::move(m);
    return vols;
  };
  auto error_of = [&](const std::vector<double>& vols) {
    double worst = 0;
    for (std::size_t i = 0; i < k; ++i)
      worst = std::max(worst, std::abs(vols[i] / spec.volumes[i] - 1.0));
    return worst;
  };

  std::vector<double> best_radii = radii;
  double worst = 1e300, best = 1e300;

  // Phase 1: damped diagonal fixed point; handles the common cases cheaply.
  for (int iter = 0; iter < 30; ++iter) {
    std::vector<double> vols = measure(radii, &mesh);
    worst = error_of(vols);
    if (worst < best) {
      best = worst;
      best_radii = radii;
    }
    if (worst < 0.02) return mesh;
    double damp = iter < 12 ? 1.0 : 0.5;
    for (std::size_t i = 0; i < k; ++i) {
      double ratio = std::pow(spec.volumes[i] / vols[i], damp / (spec.p + 3.0));
      radii[i] *= std::clamp(ratio, 0.5, 2.0);
    }
  }

  // Phase 2: Newton in log space with a finite-difference Jacobian; needed
  // when the junction placement couples the region volumes strongly.
  radii = best_radii;
  for (int iter = 0; iter < 20; ++iter) {
    std::vector<double> vols = measure(radii, &mesh);
    worst = error_of(vols);
    if (worst < best) {
      best = worst;
      best_radii = radii;
    }
    if (worst < 0.02) return mesh;

    const double delta = 0.02;
    std::vector<double> jac(k * k);  // d log V_i / d log r_j
    for (std::size_t j = 0; j < k; ++j) {
      std::vector<double> r2 = radii;
      r2[j] *= std::exp(delta);
      std::vector<double> v2 = measure(r2, nullptr);
      for (std::size_t i = 0; i < k; ++i)
        jac[i * k + j] = std::log(v2[i] / vols[i]) / delta;
    }
    std::vector<double> rhs(k), step;
    for (std::size_t i = 0; i < k; ++i) rhs[i] = std::log(spec.volumes[i] / vols[i]);
    if (!solve_dense(jac, rhs, int(k), step)) break;
    for (std::size_t i = 0; i < k; ++i)
      radii[i] *= std::exp(std::clamp(step[i], -0.35, 0.35));
  }

  std::vector<double> vols = measure(best_radii, &mesh);
  worst = error_of(vols);
  if (worst > 0.05)
    fail(Errc::no_convergence, "seed volume fitting stalled at " + std::to_string(worst));
  radii = best_radii;
  return mesh;
}

}  // namespace detail_shapes

inline ClusterMesh seed_mesh(const BubbleSpec& spec) {
  validate_spec(spec);
  Density f(spec.p, spec.epsilon);
  ClusterMesh mesh;

  switch (spec.topology) {
    case Topology::Single: {
      // Canonical pose: sphere through the origin. Scaling about the origin
      // preserves that contact and scales volume by lambda^(p+3) exactly.
      double r0 = sphere_radius_for_weighted_volume(spec.volumes[0], spec.p);
      mesh = icosphere(Vec3{r0, 0, 0}, r0, spec.refinement_level, 1, spec.volumes[0]);
      double v = weighted_region_volume(mesh, 1, f);
      double lam = std::pow(spec.volumes[0] / v, 1.0 / (spec.p + 3.0));
      for (Vec3& p : mesh.positions) p = lam * p;
      detail_shapes::apply_transform(mesh, spec.placement);
      break;
    }
    case Topology::Double: {
      std::vector<double> radii = {sphere_radius_for_weighted_volume(spec.volumes[0], spec.p),
                                   sphere_radius_for_weighted_volume(spec.volumes[1], spec.p)};
      mesh = detail_shapes::fit_seed_volumes(spec, radii, [&](const std::vector<double>& r) {
        DoubleBubbleGeometry g = double_bubble_geometry(r[0], r[1]);
        ClusterMesh m =
            double_bubble_mesh(g, spec.refinement_level, spec.volumes[0], spec.volumes[1]);
        // Canonical pose: junction circle through the origin.
        RigidTransform pose =
            RigidTransform::translate(Vec3{-g.plane_x, -g.circle_radius, 0});
        detail_shapes::apply_transform(m, pose.then(spec.placement));
        return m;
      });
      break;
    }
    case Topology::Chain3: {
      std::vector<double> radii = {sphere_radius_for_weighted_volume(spec.volumes[0], spec.p),
                                   sphere_radius_for_weighted_volume(spec.volumes[1], spec.p),
                                   sphere_radius_for_weighted_volume(spec.volumes[2], spec.p)};
      mesh = detail_shapes::fit_seed_volumes(spec, radii, [&](const std::vector<double>& r) {
        DoubleBubbleGeometry g12 = double_bubble_geometry(r[0], r[1]);
        ClusterMesh m = chain3_mesh(r[0], r[1], r[2], spec.refinement_level,
                                    {spec.volumes[0], spec.volumes[1], spec.volumes[2]});
        // Canonical pose: first junction circle through the origin.
        RigidTransform pose =
            RigidTransform::translate(Vec3{-g12.plane_x, -g12.circle_radius, 0});
        detail_shapes::apply_transform(m, pose.then(spec.placement));
        return m;
      });
      break;
    }
    case Topology::Triple: {
      std::vector<double> radii = {sphere_radius_for_weighted_volume(spec.volumes[0], spec.p),
                                   sphere_radius_for_weighted_volume(spec.volumes[1], spec.p),
                                   sphere_radius_for_weighted_volume(spec.volumes[2], spec.p)};
      std::array<double, 3> theta = {0, 2.0 * M_PI / 3.0, 4.0 * M_PI / 3.0};
      mesh = detail_shapes::fit_seed_volumes(spec, radii, [&](const std::vector<double>& r) {
        double h = 0.55 * std::min({r[0], r[1], r[2]});
        ClusterMesh m = triple_mesh({r[0], r[1], r[2]}, h, theta, spec.refinement_level,
                                    {spec.volumes[0], spec.volumes[1], spec.volumes[2]});
        // Canonical pose: singular vertex T at the origin.
        RigidTransform pose = RigidTransform::translate(Vec3{0, 0, -h});
        detail_shapes::apply_transform(m, pose.then(spec.placement));
        return m;
      });
      break;
    }
  }

  if (spec.seed_jitter > 0) {
    // Deterministic jitter, applied before the final projection.
    SplitMix64 rng(0x5eedb0bb1e5ull);
    Vec3 centroid{};
    for (const Vec3& p : mesh.positions) centroid += p;
    centroid = centroid / double(mesh.positions.size());
    double r2max = 0;
    for (const Vec3& p : mesh.positions) r2max = std::max(r2max, norm2(p - centroid));
    double amp = spec.seed_jitter * 2.0 * std::sqrt(r2max);
    for (Vec3& p : mesh.positions)
      p += amp * Vec3{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    rebuild_edges(mesh);
  }

  std::vector<double> targets = spec.volumes;
  project_volumes_inplace(mesh, f, targets);
  validate_mesh(mesh);
  return mesh;
}

// ---------------------------------------------------------------------------
// Weighted-area oracle on the exact geometry: adaptive 2D quadrature (tensor
// 3x3 Gauss-Legendre with quadrisection) over each spherical cap / disk.

namespace detail_shapes {

template <class F>
inline double gauss3x3(const F& g, double u0, double u1, double v0, double v1) {
  static const double node[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
  static const double weight[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  double su = 0.5 * (u1 - u0), sv = 0.5 * (v1 - v0);
  double cu = 0.5 * (u0 + u1), cv = 0.5 * (v0 + v1);
  double sum = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      sum += weight[i] * weight[j] * g(cu + su * node[i], cv + sv * node[j]);
  return sum * su * sv;
}

template <class F>
inline double adapt_rect(const F& g, double u0, double u1, double v0, double v1, double coarse,
                         double tol, int depth) {
  double um = 0.5 * (u0 + u1), vm = 0.5 * (v0 + v1);
  double s00 = gauss3x3(g, u0, um, v0, vm);
  double s01 = gauss3x3(g, u0, um, vm, v1);
  double s10 = gauss3x3(g, um, u1, v0, vm);
  double s11 = gauss3x3(g, um, u1, vm, v1);
  double fine = s00 + s01 + s10 + s11;
  if (depth >= 16 || std::abs(fine - coarse) <= tol)
    return fine + (fine - coarse) / 63.0;  // rule is degree 5: error drops 2^-6
  double quarter = 0.25 * tol;
  return adapt_rect(g, u0, um, v0, vm, s00, quarter, depth + 1) +
         adapt_rect(g, u0, um, vm, v1, s01, quarter, depth + 1) +
         adapt_rect(g, um, u1, v0, vm, s10, quarter, depth + 1) +
         adapt_rect(g, um, u1, vm, v1, s11, quarter, depth + 1);
}

template <class F>
inline double integrate_adaptive(const F& g, double u0, double u1, double v0, double v1,
                                 double rel_tol) {
  double coarse = gauss3x3(g, u0, u1, v0, v1);
  double tol = rel_tol * std::max(std::abs(coarse), 1e-300);
  return adapt_rect(g, u0, u1, v0, v1, coarse, tol, 0);
}

}  // namespace detail_shapes

// r^p-weighted volume of the union of the two exact bubbles under a rigid
// placement, by the divergence identity over the outer caps (the middle
// interface does not bound the union).
inline double oracle_weighted_union_volume(const DoubleBubbleGeometry& g,
                                           const RigidTransform& placement, double p,
                                           double rel_tol = 1e-6) {
  Density f(p);
  auto cap_flux = [&](Vec3 center, double radius, double theta0, double theta1) {
    auto integrand = [&](double theta, double phi) {
      Vec3 unit{std::cos(theta), std::sin(theta) * std::cos(phi),
                std::sin(theta) * std::sin(phi)};
      Vec3 y = placement.apply(center + radius * unit);
      Vec3 n = placement.rotation * unit;  // outward normal of the bubble
      return f.value(y) * dot(y, n) * radius * radius * std::sin(theta);
    };
    return detail_shapes::integrate_adaptive(integrand, theta0, theta1, 0.0, 2.0 * M_PI,
                                             rel_tol);
  };
  double flux = cap_flux(Vec3{0, 0, 0}, g.r1, g.cap1_polar, M_PI);
  flux += cap_flux(Vec3{g.center_distance, 0, 0}, g.r2, 0.0, g.cap2_polar);
  return flux / (p + 3.0);
}

// r^p-weighted area of the three exact interfaces under a rigid placement.
inline double oracle_weighted_area(const DoubleBubbleGeometry& g,
                                   const RigidTransform& placement, double p,
                                   double rel_tol = 1e-6) {
  Density f(p);
  auto sphere_patch = [&](Vec3 center, double radius, double theta0, double theta1) {
    auto integrand = [&](double theta, double phi) {
      Vec3 x = center + radius * Vec3{std::cos(theta), std::sin(theta) * std::cos(phi),
                                      std::sin(theta) * std::sin(phi)};
      return f.value(placement.apply(x)) * radius * radius * std::sin(theta);
    };
    return detail_shapes::integrate_adaptive(integrand, theta0, theta1, 0.0, 2.0 * M_PI,
                                             rel_tol);
  };

  double area = sphere_patch(Vec3{0, 0, 0}, g.r1, g.cap1_polar, M_PI);
  area += sphere_patch(Vec3{g.center_distance, 0, 0}, g.r2, 0.0, g.cap2_polar);

  if (g.flat) {
    auto integrand = [&](double r, double phi) {
      Vec3 x{g.plane_x, r * std::cos(phi), r * std::sin(phi)};
      return f.value(placement.apply(x)) * r;
    };
    area += detail_shapes::integrate_adaptive(integrand, 0.0, g.circle_radius, 0.0,
                                              2.0 * M_PI, rel_tol);
  } else {
    double theta_rim = std::asin(std::clamp(g.circle_radius / g.bulge_radius, 0.0, 1.0));
    Vec3 center{g.bulge_center_x, 0, 0};
    double s = g.bulge_side;
    auto integrand = [&](double theta, double phi) {
      Vec3 x = center + g.bulge_radius * Vec3{-s * std::cos(theta),
                                              std::sin(theta) * std::cos(phi),
                                              std::sin(theta) * std::sin(phi)};
      return f.value(placement.apply(x)) * g.bulge_radius * g.bulge_radius * std::sin(theta);
    };
    area += detail_shapes::integrate_adaptive(integrand, 0.0, theta_rim, 0.0, 2.0 * M_PI,
                                              rel_tol);
  }
  return area;
}

// Weighted area of an exact sphere under a rigid placement, by the same
// adaptive quadrature as the double-bubble oracle. The closed forms above
// cross-check this path in the unit tests.
inline double oracle_sphere_weighted_area(double radius, const RigidTransform& placement,
                                          double p, double rel_tol = 1e-6) {
  Density f(p);
  auto integrand = [&](double theta, double phi) {
    Vec3 x = radius * Vec3{std::cos(theta), std::sin(theta) * std::cos(phi),
                           std::sin(theta) * std::sin(phi)};
    return f.value(placement.apply(x)) * radius * radius * std::sin(theta);
  };
  return detail_shapes::integrate_adaptive(integrand, 0.0, M_PI, 0.0, 2.0 * M_PI, rel_tol);
}

// Placement scan of the equal standard double bubble along its symmetry
// plane. Comparing areas of different placements only makes sense at fixed
// weighted volume, so each placement is renormalized by the exact scaling law
// (scaling about the origin keeps "circle through the origin" invariant and
// the equal-volume symmetry makes one global factor suffice).
struct PlacementScanPoint {
  double offset = 0;            // translation along +y from the through-origin pose
  double normalized_area = 0;   // area rescaled to the reference union volume
};

struct PlacementScanResult {
  std::vector<PlacementScanPoint> points;
  std::size_t argmin = 0;
  double step = 0;
  double reference_volume = 0;  // union volume all areas are normalized to
};

inline PlacementScanResult scan_equal_double_bubble_placement(double p, double offset_lo,
                                                              double offset_hi, int steps,
                                                              double rel_tol = 1e-6) {
  if (steps < 2) fail(Errc::invalid_parameter, "scan needs at least 2 steps");
  DoubleBubbleGeometry g = double_bubble_geometry(1.0, 1.0);
  PlacementScanResult out;
  out.step = (offset_hi - offset_lo) / (steps - 1);
  // Normalize every placement to the union volume of the through-origin pose
  // (offset 0), so normalized areas can be rescaled exactly by homogeneity.
  RigidTransform pose0 = RigidTransform::translate(Vec3{-g.plane_x, -g.circle_radius, 0});
  out.reference_volume = oracle_weighted_union_volume(g, pose0, p, rel_tol);
  for (int i = 0; i < steps; ++i) {
    double t = offset_lo + out.step * i;
    RigidTransform tr =
        RigidTransform::translate(Vec3{-g.plane_x, -g.circle_radius + t, 0});
    double area = oracle_weighted_area(g, tr, p, rel_tol);
    double vol = oracle_weighted_union_volume(g, tr, p, rel_tol);
    double norm = area * std::pow(out.reference_volume / vol, (p + 2.0) / (p + 3.0));
    out.points.push_back({t, norm});
    if (norm < out.points[out.argmin].normalized_area) out.argmin = i;
  }
  return out;
}

}  // namespace bubbles
