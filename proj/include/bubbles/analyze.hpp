#pragma once

// Post-hoc verification metrics for evolved clusters: dihedral angles along
// singular curves, generalized mean curvature per interface, distances of the
// singular set to the origin, and scaling-law checks.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "bubbles/core.hpp"
#include "bubbles/density.hpp"
#include "bubbles/mesh.hpp"

namespace bubbles {

struct AngleStats {
  std::size_t samples = 0;
  double mean_deg = 0;       // mean angle
  double mean_dev_deg = 0;   // mean |angle - reference|
  double max_dev_deg = 0;    // max |angle - reference|
};

struct InterfaceCurvature {
  RegionId lo = 0, hi = 0;
  std::size_t samples = 0;
  double mean = 0;    // mean generalized curvature H_psi over interior vertices
  double stddev = 0;
};

struct OriginContact {
  double singular_curve = std::numeric_limits<double>::infinity();
  double singular_vertex = std::numeric_limits<double>::infinity();
  double surface = std::numeric_limits<double>::infinity();
};

struct ScalingCheck {
  double area_ratio = 0;
  std::vector<double> volume_ratios;
};

struct MetricsReport {
  double weighted_area = 0;
  std::vector<std::pair<RegionId, double>> region_volumes;
  AngleStats junction;  // dihedrals along singular curves vs 120 degrees
  AngleStats quad;      // angles between singular edges at singular vertices
                        // vs acos(-1/3)
  OriginContact origin;
  std::vector<InterfaceCurvature> curvature;
  std::vector<double> vertex_separations;  // pairwise singular-vertex distances
};

// ---------------------------------------------------------------------------
// Junction dihedral angles: for every singular edge, the three angles between
// consecutive facet wings around the edge.

inline AngleStats junction_angles(const ClusterMesh& mesh) {
  AngleStats stats;
  double sum_angle = 0, sum_dev = 0;
  for (const EdgeRecord& e : mesh.edges) {
    if (e.count != 3) continue;
    const Vec3 &pa = mesh.positions[e.a], &pb = mesh.positions[e.b];
    Vec3 axis = normalized(pb - pa);
    Vec3 u0{}, v0{};
    double wing_angle[3];
    for (int k = 0; k < 3; ++k) {
      const Facet& fc = mesh.facets[e.facet[k]];
      VertexId w = fc.v[0];
      for (VertexId x : fc.v)
        if (x != e.a && x != e.b) w = x;
      Vec3 t = mesh.positions[w] - pa;
      t -= dot(t, axis) * axis;
      t = normalized(t);
      if (k == 0) {
        u0 = t;
        v0 = cross(axis, u0);
        wing_angle[0] = 0;
      } else {
        wing_angle[k] = std::atan2(dot(t, v0), dot(t, u0));
        if (wing_angle[k] < 0) wing_angle[k] += 2.0 * M_PI;
      }
    }
    std::sort(wing_angle, wing_angle + 3);
    double gaps[3] = {wing_angle[1] - wing_angle[0], wing_angle[2] - wing_angle[1],
                      2.0 * M_PI - wing_angle[2] + wing_angle[0]};
    for (double gap : gaps) {
      double deg = gap * 180.0 / M_PI;
      double dev = std::abs(deg - 120.0);
      sum_angle += deg;
      sum_dev += dev;
      stats.max_dev_deg = std::max(stats.max_dev_deg, dev);
      ++stats.samples;
    }
  }
  if (stats.samples) {
    stats.mean_deg = sum_angle / double(stats.samples);
    stats.mean_dev_deg = sum_dev / double(stats.samples);
  }
  return stats;
}

// Angles between the singular edges meeting at each singular vertex, against
// the tetrahedral angle acos(-1/3).
inline AngleStats quad_vertex_angles(const ClusterMesh& mesh) {
  const double ref_deg = std::acos(-1.0 / 3.0) * 180.0 / M_PI;
  AngleStats stats;
  double sum_angle = 0, sum_dev = 0;
  std::vector<std::uint8_t> cls = vertex_singularity(mesh);
  for (VertexId v = 0; v < mesh.positions.size(); ++v) {
    if (cls[v] != 2) continue;
    std::vector<Vec3> dirs;
    for (const EdgeRecord& e : mesh.edges) {
      if (e.count != 3) continue;
      if (e.a == v)
        dirs.push_back(normalized(mesh.positions[e.b] - mesh.positions[v]));
      else if (e.b == v)
        dirs.push_back(normalized(mesh.positions[e.a] - mesh.positions[v]));
    }
    for (std::size_t i = 0; i < dirs.size(); ++i)
      for (std::size_t j = i + 1; j < dirs.size(); ++j) {
        double deg = angle_between(dirs[i], dirs[j]) * 180.0 / M_PI;
        double dev = std::abs(deg - ref_deg);
        sum_angle += deg;
        sum_dev += dev;
        stats.max_dev_deg = std::max(stats.max_dev_deg, dev);
        ++stats.samples;
      }
  }
  if (stats.samples) {
    stats.mean_deg = sum_angle / double(stats.samples);
    stats.mean_dev_deg = sum_dev / double(stats.samples);
  }
  return stats;
}

// ---------------------------------------------------------------------------
// Generalized curvature H_psi = H - <grad(log f), N> per interface.
//
// H is the discrete mean curvature (sum of the principal curvatures) from the
// cotangent formula with mixed Voronoi areas. Sign convention: H is measured
// against each interface's canonical normal N (back region -> front region),
// which for exterior facets points into the bubble; a round bubble therefore
// has H = +2/R. Vertices on singular curves are excluded.
//
// The <grad(log f), N> term is p (y.N)/|y|^2: an O(h) vertex position error
// turns into an O(h/|y|) curvature error, which diverges where the surface
// meets the origin (where the density itself is singular and H_psi is not
// defined). Statistics therefore skip vertices closer to the origin than
// twice their local edge length whenever p > 0; the excluded ball vanishes
// under refinement.

namespace detail_analyze {

inline double cot(const Vec3& a, const Vec3& b) {
  double c = dot(a, b);
  double s = norm(cross(a, b));
  return s > 0 ? c / s : 0.0;
}

// Meyer et al. mixed area contribution of one triangle at its corner v0.
inline double mixed_area(const Vec3& v0, const Vec3& v1, const Vec3& v2) {
  Vec3 e01 = v1 - v0, e02 = v2 - v0, e12 = v2 - v1;
  double area = 0.5 * norm(cross(e01, e02));
  if (area <= 0) return 0;
  double d0 = dot(e01, e02), d1 = dot(-e01, e12), d2 = dot(-e02, -e12);
  if (d0 < 0) return area / 2;          // obtuse at v0
  if (d1 < 0 || d2 < 0) return area / 4;  // obtuse elsewhere
  double cot1 = detail_analyze::cot(-e01, e12);   // angle at v1, opposite edge v0-v2
  double cot2 = detail_analyze::cot(-e02, -e12);  // angle at v2, opposite edge v0-v1
  return (norm2(e02) * cot1 + norm2(e01) * cot2) / 8.0;
}

}  // namespace detail_analyze

inline std::vector<InterfaceCurvature> generalized_curvature(const ClusterMesh& mesh,
                                                             const Density& f) {
  std::vector<std::uint8_t> cls = vertex_singularity(mesh);

  std::map<std::pair<RegionId, RegionId>, std::vector<FacetId>> interfaces;
  for (FacetId i = 0; i < mesh.facets.size(); ++i)
    interfaces[{mesh.facets[i].back, mesh.facets[i].front}].push_back(i);

  std::vector<InterfaceCurvature> out;
  for (const auto& [key, facets] : interfaces) {
    InterfaceCurvature ic;
    ic.lo = key.first;
    ic.hi = key.second;

    // Vertices interior to this interface: adjacent facets all belong here.
    std::map<VertexId, std::vector<FacetId>> star;
    for (FacetId fi : facets)
      for (VertexId v : mesh.facets[fi].v) star[v].push_back(fi);

    std::vector<double> values;
    for (const auto& [v, adj] : star) {
      // Skip singular-curve and singular vertices; interior vertices have
      // their whole star on this interface (validation forbids anything else
      // at manifold edges).
      if (cls[v] != 0) continue;
      Vec3 kvec{};
      double area_mixed = 0;
      Vec3 normal{};
      double edge_sum = 0;
      int edge_n = 0;
      for (FacetId fi : adj) {
        const Facet& fc = mesh.facets[fi];
        int iv = fc.v[0] == v ? 0 : (fc.v[1] == v ? 1 : 2);
        const Vec3 &p0 = mesh.positions[fc.v[iv]], &p1 = mesh.positions[fc.v[(iv + 1) % 3]],
                   &p2 = mesh.positions[fc.v[(iv + 2) % 3]];
        area_mixed += detail_analyze::mixed_area(p0, p1, p2);
        // Cotangent weights: angle at p2 opposite edge (v, p1), angle at p1
        // opposite edge (v, p2).
        double cot_a = detail_analyze::cot(p0 - p2, p1 - p2);
        double cot_b = detail_analyze::cot(p0 - p1, p2 - p1);
        kvec += 0.5 * (cot_a * (p0 - p1) + cot_b * (p0 - p2));
        normal += mesh.facet_area_vector(fi);
        edge_sum += norm(p1 - p0) + norm(p2 - p0);
        edge_n += 2;
      }
      if (area_mixed <= 0) continue;
      double h_local = edge_sum / std::max(edge_n, 1);
      if (f.p > 0 && norm(mesh.positions[v]) < 2.0 * h_local) continue;
      double nn = norm(normal);
      if (nn == 0) continue;
      normal = normal / nn;
      kvec = kvec / area_mixed;
      // kvec = H * outward normal; flip onto the canonical (back->front)
      // normal so a bubble with inward canonical normal reports H = +2/R.
      double h = -dot(kvec, normal);
      double hpsi = h - dot(f.grad_log(mesh.positions[v]), normal);
      values.push_back(hpsi);
    }

    ic.samples = values.size();
    if (!values.empty()) {
      double mean = 0;
      for (double x : values) mean += x;
      mean /= double(values.size());
      double var = 0;
      for (double x : values) var += (x - mean) * (x - mean);
      var /= double(values.size());
      ic.mean = mean;
      ic.stddev = std::sqrt(var);
    }
    out.push_back(ic);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Distances from the origin to the singular set / surface.

inline OriginContact origin_contact(const ClusterMesh& mesh) {
  OriginContact oc;
  Vec3 origin{};
  std::vector<std::uint8_t> cls = vertex_singularity(mesh);
  for (const EdgeRecord& e : mesh.edges)
    if (e.count == 3)
      oc.singular_curve = std::min(
          oc.singular_curve,
          point_segment_distance(origin, mesh.positions[e.a], mesh.positions[e.b]));
  for (VertexId v = 0; v < mesh.positions.size(); ++v)
    if (cls[v] == 2) oc.singular_vertex = std::min(oc.singular_vertex, norm(mesh.positions[v]));
  for (FacetId i = 0; i < mesh.facets.size(); ++i) {
    const auto& fv = mesh.facets[i].v;
    oc.surface = std::min(oc.surface,
                          point_triangle_distance(origin, mesh.positions[fv[0]],
                                                  mesh.positions[fv[1]], mesh.positions[fv[2]]));
  }
  return oc;
}

// ---------------------------------------------------------------------------
// Scaling law check: positions scaled by lambda must scale weighted area by
// lambda^(p+2) and weighted volumes by lambda^(p+3).

inline ScalingCheck scaling_check(const ClusterMesh& mesh, const Density& f, double lambda) {
  if (!(lambda > 0)) fail(Errc::invalid_parameter, "lambda must be positive");
  ClusterMesh scaled = mesh;
  for (Vec3& p : scaled.positions) p = lambda * p;
  ScalingCheck sc;
  sc.area_ratio = total_weighted_area(scaled, f) / total_weighted_area(mesh, f);
  std::vector<double> v0 = weighted_region_volumes(mesh, f);
  std::vector<double> v1 = weighted_region_volumes(scaled, f);
  for (std::size_t i = 0; i < v0.size(); ++i) sc.volume_ratios.push_back(v1[i] / v0[i]);
  return sc;
}

// ---------------------------------------------------------------------------
// Full report

inline MetricsReport compute_metrics(const ClusterMesh& mesh, const Density& f) {
  MetricsReport r;
  r.weighted_area = total_weighted_area(mesh, f);
  for (const Region& reg : mesh.regions)
    r.region_volumes.push_back({reg.id, weighted_region_volume(mesh, reg.id, f)});
  r.junction = junction_angles(mesh);
  r.quad = quad_vertex_angles(mesh);
  r.origin = origin_contact(mesh);
  r.curvature = generalized_curvature(mesh, f);
  std::vector<VertexId> sv = singular_vertices(mesh);
  for (std::size_t i = 0; i < sv.size(); ++i)
    for (std::size_t j = i + 1; j < sv.size(); ++j)
      r.vertex_separations.push_back(
          distance(mesh.positions[sv[i]], mesh.positions[sv[j]]));
  return r;
}

}  // namespace bubbles
