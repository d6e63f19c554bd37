#pragma once

// Radial density f(r) = r^p, its log-gradient, and the weighted area/volume
// functionals on cluster meshes together with exact analytic gradients.
//
// Quadrature: the 3-point edge-midpoint rule on each triangle. It is exact
// for quadratic integrands, commutes with scaling (so the lambda^(p+2) /
// lambda^(p+3) homogeneity of the functionals holds to rounding), and
// refinement rather than rule order controls accuracy.
//
// All reductions run in fixed facet-index order, so results are bit-stable
// for a given mesh.

#include <cmath>
#include <string>
#include <vector>

#include "bubbles/core.hpp"
#include "bubbles/mesh.hpp"

namespace bubbles {

struct Density {
  double p = 0.0;        // exponent, >= 0
  double epsilon = 0.0;  // optional regularization: r -> sqrt(r^2 + eps^2)

  Density() = default;
  Density(double p_, double epsilon_ = 0.0) : p(p_), epsilon(epsilon_) {
    if (!(p >= 0.0)) fail(Errc::invalid_parameter, "density exponent must be >= 0");
    if (!(epsilon >= 0.0)) fail(Errc::invalid_parameter, "epsilon must be >= 0");
  }

  // f at a point; base = r^2 + eps^2 is raised to p/2. The common exponents
  // get fast paths because this sits in the innermost loops.
  double value(const Vec3& x) const {
    double base = norm2(x) + epsilon * epsilon;
    double half = 0.5 * p;
    if (half == 0.0) return 1.0;
    if (half == 1.0) return base;
    if (half == 0.5) return std::sqrt(base);
    if (half == 1.5) return base * std::sqrt(base);
    if (half == 0.25) return std::sqrt(std::sqrt(base));
    if (half == 2.5) return base * base * std::sqrt(base);
    return std::pow(base, half);
  }

  // grad(log f) = p x / (r^2 + eps^2)
  Vec3 grad_log(const Vec3& x) const {
    double denom = norm2(x) + epsilon * epsilon;
    if (denom == 0.0) return Vec3{};
    return x * (p / denom);
  }

  // grad f = p f(x) x / (r^2 + eps^2)
  Vec3 grad(const Vec3& x) const {
    double denom = norm2(x) + epsilon * epsilon;
    if (denom == 0.0) return Vec3{};
    return x * (p * value(x) / denom);
  }
};

struct WeightedMeasure {
  double value = 0.0;
  std::vector<std::pair<RegionId, double>> per_region;
};

namespace detail {

inline void check_quadrature_point(const Density& f, const Vec3& m) {
  if (f.p < 1.0 && f.p > 0.0 && f.epsilon == 0.0 && norm2(m) < 1e-24)
    fail(Errc::origin_singularity,
         "quadrature point within 1e-12 of the origin with p < 1 and no regularization");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Weighted area

inline double weighted_triangle_area(const Vec3& a, const Vec3& b, const Vec3& c,
                                     const Density& f) {
  Vec3 area_vec = 0.5 * cross(b - a, c - a);
  double area = norm(area_vec);
  if (!(area > 0.0)) fail(Errc::degenerate_triangle, "zero-area triangle");
  double s = (f.value(0.5 * (a + b)) + f.value(0.5 * (b + c)) + f.value(0.5 * (c + a))) / 3.0;
  return area * s;
}

inline double weighted_facet_area(const ClusterMesh& mesh, FacetId fid, const Density& f) {
  const Facet& fc = mesh.facets[fid];
  return weighted_triangle_area(mesh.positions[fc.v[0]], mesh.positions[fc.v[1]],
                                mesh.positions[fc.v[2]], f);
}

inline double total_weighted_area(const ClusterMesh& mesh, const Density& f) {
  double sum = 0;
  for (FacetId i = 0; i < mesh.facets.size(); ++i) sum += weighted_facet_area(mesh, i, f);
  return sum;
}

inline WeightedMeasure weighted_area_measure(const ClusterMesh& mesh, const Density& f) {
  WeightedMeasure m;
  for (const Region& r : mesh.regions) m.per_region.push_back({r.id, 0.0});
  for (FacetId i = 0; i < mesh.facets.size(); ++i) {
    double a = weighted_facet_area(mesh, i, f);
    m.value += a;
    for (auto& [id, acc] : m.per_region)
      if (mesh.facets[i].back == id || mesh.facets[i].front == id) acc += a;
  }
  return m;
}

// ---------------------------------------------------------------------------
// Weighted volume via the divergence identity div(f(r) x) = (p+3) r^p, so
// V = 1/(p+3) * surface integral of f(x) x.n over the region's oriented
// boundary.

namespace detail {

inline double facet_orientation_sign(const Facet& fc, RegionId region) {
  if (fc.back == region) return 1.0;   // normal points away from the region
  if (fc.front == region) return -1.0; // normal points into the region
  return 0.0;
}

inline double facet_volume_flux(const ClusterMesh& mesh, FacetId fid, const Density& f) {
  const Facet& fc = mesh.facets[fid];
  const Vec3 &a = mesh.positions[fc.v[0]], &b = mesh.positions[fc.v[1]],
             &c = mesh.positions[fc.v[2]];
  Vec3 area_vec = 0.5 * cross(b - a, c - a);
  Vec3 mab = 0.5 * (a + b), mbc = 0.5 * (b + c), mca = 0.5 * (c + a);
  Vec3 q = (f.value(mab) * mab + f.value(mbc) * mbc + f.value(mca) * mca) / 3.0;
  return dot(area_vec, q);
}

}  // namespace detail

inline double weighted_region_volume(const ClusterMesh& mesh, RegionId region,
                                     const Density& f) {
  if (mesh.find_region(region) == nullptr)
    fail(Errc::bad_region_label, "unknown region " + std::to_string(region));
  double sum = 0;
  for (FacetId i = 0; i < mesh.facets.size(); ++i) {
    double sign = detail::facet_orientation_sign(mesh.facets[i], region);
    if (sign != 0.0) sum += sign * detail::facet_volume_flux(mesh, i, f);
  }
  return sum / (f.p + 3.0);
}

namespace detail {

inline int region_slot(const ClusterMesh& mesh, RegionId id) {
  for (std::size_t i = 0; i < mesh.regions.size(); ++i)
    if (mesh.regions[i].id == id) return int(i);
  return -1;
}

}  // namespace detail

// All region volumes in one facet sweep (a facet borders at most two regions).
inline std::vector<double> weighted_region_volumes(const ClusterMesh& mesh, const Density& f) {
  std::vector<double> out(mesh.regions.size(), 0.0);
  for (FacetId i = 0; i < mesh.facets.size(); ++i) {
    const Facet& fc = mesh.facets[i];
    double flux = detail::facet_volume_flux(mesh, i, f);
    int sb = fc.back == kExterior ? -1 : detail::region_slot(mesh, fc.back);
    int sf = fc.front == kExterior ? -1 : detail::region_slot(mesh, fc.front);
    if (sb >= 0) out[sb] += flux;
    if (sf >= 0) out[sf] -= flux;
  }
  double inv = 1.0 / (f.p + 3.0);
  for (double& v : out) v *= inv;
  return out;
}

inline WeightedMeasure weighted_volume_measure(const ClusterMesh& mesh, const Density& f) {
  WeightedMeasure m;
  for (const Region& r : mesh.regions) {
    double v = weighted_region_volume(mesh, r.id, f);
    m.per_region.push_back({r.id, v});
    m.value += v;
  }
  return m;
}

// ---------------------------------------------------------------------------
// Analytic gradients. These differentiate exactly what the discrete
// functionals compute: both the Euclidean area factor and the density values
// at the moving quadrature points.

inline void area_gradient(const ClusterMesh& mesh, const Density& f, std::vector<Vec3>& grad) {
  grad.assign(mesh.positions.size(), Vec3{});
  for (const Facet& fc : mesh.facets) {
    const Vec3 &a = mesh.positions[fc.v[0]], &b = mesh.positions[fc.v[1]],
               &c = mesh.positions[fc.v[2]];
    Vec3 area_vec = 0.5 * cross(b - a, c - a);
    double area = norm(area_vec);
    if (!(area > 0.0)) fail(Errc::degenerate_facet, "zero-area facet in gradient");
    Vec3 n = area_vec / area;

    Vec3 mab = 0.5 * (a + b), mbc = 0.5 * (b + c), mca = 0.5 * (c + a);
    detail::check_quadrature_point(f, mab);
    detail::check_quadrature_point(f, mbc);
    detail::check_quadrature_point(f, mca);
    double s = (f.value(mab) + f.value(mbc) + f.value(mca)) / 3.0;
    Vec3 gab = f.grad(mab), gbc = f.grad(mbc), gca = f.grad(mca);

    // d(area)/d(vertex) = 0.5 * n x (opposite edge); each vertex also moves
    // the two midpoints it belongs to, each with chain factor 1/2.
    grad[fc.v[0]] += 0.5 * cross(n, c - b) * s + area * (1.0 / 6.0) * (gab + gca);
    grad[fc.v[1]] += 0.5 * cross(n, a - c) * s + area * (1.0 / 6.0) * (gbc + gab);
    grad[fc.v[2]] += 0.5 * cross(n, b - a) * s + area * (1.0 / 6.0) * (gca + gbc);
  }
}

namespace detail {

// Per-facet volume-flux derivative with respect to the three corners,
// accumulated into grad with weight w.
inline void accumulate_volume_flux_gradient(const ClusterMesh& mesh, const Facet& fc,
                                            const Density& f, double w,
                                            std::vector<Vec3>& grad) {
  const Vec3 &a = mesh.positions[fc.v[0]], &b = mesh.positions[fc.v[1]],
             &c = mesh.positions[fc.v[2]];
  Vec3 area_vec = 0.5 * cross(b - a, c - a);
  Vec3 mab = 0.5 * (a + b), mbc = 0.5 * (b + c), mca = 0.5 * (c + a);
  check_quadrature_point(f, mab);
  check_quadrature_point(f, mbc);
  check_quadrature_point(f, mca);
  double fab = f.value(mab), fbc = f.value(mbc), fca = f.value(mca);
  Vec3 q = (fab * mab + fbc * mbc + fca * mca) / 3.0;
  Vec3 gab = f.grad(mab), gbc = f.grad(mbc), gca = f.grad(mca);

  // d(area_vec . q)/da splits into the area-vector part ((b-c) x q)/2 and
  // the quadrature part over the two midpoints containing a.
  grad[fc.v[0]] += w * (0.5 * cross(b - c, q) +
                        (1.0 / 6.0) * (fab * area_vec + dot(area_vec, mab) * gab +
                                       fca * area_vec + dot(area_vec, mca) * gca));
  grad[fc.v[1]] += w * (0.5 * cross(c - a, q) +
                        (1.0 / 6.0) * (fbc * area_vec + dot(area_vec, mbc) * gbc +
                                       fab * area_vec + dot(area_vec, mab) * gab));
  grad[fc.v[2]] += w * (0.5 * cross(a - b, q) +
                        (1.0 / 6.0) * (fca * area_vec + dot(area_vec, mca) * gca +
                                       fbc * area_vec + dot(area_vec, mbc) * gbc));
}

}  // namespace detail

inline void volume_gradient(const ClusterMesh& mesh, RegionId region, const Density& f,
                            std::vector<Vec3>& grad) {
  if (mesh.find_region(region) == nullptr)
    fail(Errc::bad_region_label, "unknown region " + std::to_string(region));
  grad.assign(mesh.positions.size(), Vec3{});
  double inv = 1.0 / (f.p + 3.0);
  for (const Facet& fc : mesh.facets) {
    double sign = detail::facet_orientation_sign(fc, region);
    if (sign == 0.0) continue;
    detail::accumulate_volume_flux_gradient(mesh, fc, f, sign * inv, grad);
  }
}

// Gradients of every region volume in one facet sweep.
inline void volume_gradients(const ClusterMesh& mesh, const Density& f,
                             std::vector<std::vector<Vec3>>& grads) {
  grads.resize(mesh.regions.size());
  for (auto& g : grads) g.assign(mesh.positions.size(), Vec3{});
  double inv = 1.0 / (f.p + 3.0);
  for (const Facet& fc : mesh.facets) {
    int sb = fc.back == kExterior ? -1 : detail::region_slot(mesh, fc.back);
    int sf = fc.front == kExterior ? -1 : detail::region_slot(mesh, fc.front);
    if (sb >= 0) detail::accumulate_volume_flux_gradient(mesh, fc, f, inv, grads[sb]);
    if (sf >= 0) detail::accumulate_volume_flux_gradient(mesh, fc, f, -inv, grads[sf]);
  }
}

}  // namespace bubbles
