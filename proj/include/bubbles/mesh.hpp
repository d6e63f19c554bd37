#pragma once

// Triangulated multi-region surface complex ("cluster"): oriented facets
// labeled by the pair of regions they separate, plus topology queries and the
// local remeshing operations used during evolution.
//
// Orientation convention, used everywhere: a facet's right-hand-rule normal
// points from its back region into its front region, and facets are stored
// with back < front, so the normal always points from the lower-numbered
// region into the higher-numbered one. Region 0 is the unbounded exterior,
// hence facets on the outer surface carry normals pointing into the bubble.
//
// All queries are safe to call concurrently on a mesh that is not being
// mutated; the remeshing operations take the mesh by value/const-ref and
// return a fresh validated mesh.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "bubbles/core.hpp"

namespace bubbles {

using VertexId = std::uint32_t;
using FacetId = std::uint32_t;
using RegionId = std::uint16_t;

inline constexpr VertexId kInvalidVertex = 0xffffffffu;
inline constexpr RegionId kExterior = 0;

struct Facet {
  std::array<VertexId, 3> v{};
  RegionId back = kExterior;   // region behind the facet (normal leaves it)
  RegionId front = kExterior;  // region the normal points into
};

struct Region {
  RegionId id = 0;
  double target_weighted_volume = 0.0;
};

struct EdgeKey {
  VertexId a = 0, b = 0;  // a < b

  EdgeKey() = default;
  EdgeKey(VertexId u, VertexId v) : a(std::min(u, v)), b(std::max(u, v)) {}

  friend bool operator==(const EdgeKey&, const EdgeKey&) = default;
  friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

// Derived incidence record; at most four facets may share an edge.
struct EdgeRecord {
  VertexId a = 0, b = 0;
  std::array<FacetId, 4> facet{};
  std::uint8_t count = 0;
};

struct ClusterMesh {
  std::vector<Vec3> positions;
  std::vector<Facet> facets;
  std::vector<Region> regions;
  std::vector<EdgeRecord> edges;  // sorted by (a, b); rebuilt by finalize_mesh

  std::size_t vertex_count() const { return positions.size(); }
  std::size_t facet_count() const { return facets.size(); }

  Vec3 facet_area_vector(FacetId f) const {
    const Facet& fc = facets[f];
    const Vec3 &a = positions[fc.v[0]], &b = positions[fc.v[1]], &c = positions[fc.v[2]];
    return 0.5 * cross(b - a, c - a);
  }
  double facet_area(FacetId f) const { return norm(facet_area_vector(f)); }

  Vec3 facet_centroid(FacetId f) const {
    const Facet& fc = facets[f];
    return (positions[fc.v[0]] + positions[fc.v[1]] + positions[fc.v[2]]) / 3.0;
  }

  const Region* find_region(RegionId id) const {
    for (const Region& r : regions)
      if (r.id == id) return &r;
    return nullptr;
  }
};

// ---------------------------------------------------------------------------
// Derived indices and validation

inline void rebuild_edges(ClusterMesh& mesh) {
  struct Item {
    VertexId a, b;
    FacetId f;
  };
  std::vector<Item> items;
  items.reserve(mesh.facets.size() * 3);
  for (FacetId f = 0; f < mesh.facets.size(); ++f) {
    const auto& v = mesh.facets[f].v;
    for (int k = 0; k < 3; ++k) {
      VertexId u = v[k], w = v[(k + 1) % 3];
      items.push_back({std::min(u, w), std::max(u, w), f});
    }
  }
  std::sort(items.begin(), items.end(), [](const Item& l, const Item& r) {
    return std::tie(l.a, l.b, l.f) < std::tie(r.a, r.b, r.f);
  });
  mesh.edges.clear();
  for (std::size_t i = 0; i < items.size();) {
    EdgeRecord rec;
    rec.a = items[i].a;
    rec.b = items[i].b;
    std::size_t j = i;
    while (j < items.size() && items[j].a == rec.a && items[j].b == rec.b) {
      if (rec.count < 4) rec.facet[rec.count] = items[j].f;
      if (rec.count < 255) ++rec.count;
      ++j;
    }
    mesh.edges.push_back(rec);
    i = j;
  }
}

inline const EdgeRecord* find_edge(const ClusterMesh& mesh, EdgeKey key) {
  auto it = std::lower_bound(mesh.edges.begin(), mesh.edges.end(), key,
                             [](const EdgeRecord& e, const EdgeKey& k) {
                               return std::tie(e.a, e.b) < std::tie(k.a, k.b);
                             });
  if (it == mesh.edges.end() || it->a != key.a || it->b != key.b) return nullptr;
  return &*it;
}

// Euclidean signed volume of a region from its oriented boundary; used by
// validation to catch globally inverted orientations.
inline double euclidean_region_volume(const ClusterMesh& mesh, RegionId region) {
  double vol = 0;
  for (FacetId f = 0; f < mesh.facets.size(); ++f) {
    const Facet& fc = mesh.facets[f];
    double sign;
    if (fc.back == region)
      sign = 1.0;  // normal leaves the region: outward
    else if (fc.front == region)
      sign = -1.0;
    else
      continue;
    vol += sign * dot(mesh.facet_area_vector(f), mesh.facet_centroid(f)) / 3.0;
  }
  return vol;
}

inline void validate_mesh(const ClusterMesh& mesh) {
  if (mesh.facets.empty()) fail(Errc::invalid_parameter, "facet list is empty");
  if (mesh.regions.empty()) fail(Errc::invalid_parameter, "no regions declared");

  std::vector<RegionId> ids;
  for (const Region& r : mesh.regions) {
    if (r.id == kExterior) fail(Errc::bad_region_label, "region id 0 is reserved for the exterior");
    ids.push_back(r.id);
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
    fail(Errc::bad_region_label, "duplicate region id");
  auto known = [&](RegionId id) {
    return id == kExterior || std::binary_search(ids.begin(), ids.end(), id);
  };

  for (FacetId f = 0; f < mesh.facets.size(); ++f) {
    const Facet& fc = mesh.facets[f];
    for (VertexId v : fc.v)
      if (v >= mesh.positions.size())
        fail(Errc::invalid_parameter, "facet " + std::to_string(f) + " vertex out of range");
    if (fc.v[0] == fc.v[1] || fc.v[1] == fc.v[2] || fc.v[0] == fc.v[2])
      fail(Errc::degenerate_facet, "facet " + std::to_string(f) + " repeats a vertex");
    if (fc.back == fc.front)
      fail(Errc::bad_region_label, "facet " + std::to_string(f) + " has equal regions");
    if (fc.back > fc.front)
      fail(Errc::bad_region_label,
           "facet " + std::to_string(f) + " violates the back < front convention");
    if (!known(fc.back) || !known(fc.front))
      fail(Errc::bad_region_label, "facet " + std::to_string(f) + " references unknown region");
    if (!(mesh.facet_area(f) > 0.0))
      fail(Errc::degenerate_facet, "facet " + std::to_string(f) + " has zero area");
  }

  for (const EdgeRecord& e : mesh.edges) {
    if (e.count == 1)
      fail(Errc::open_boundary, "edge (" + std::to_string(e.a) + "," + std::to_string(e.b) +
                                    ") borders a single facet");
    if (e.count > 4)
      fail(Errc::bad_edge_incidence, "edge (" + std::to_string(e.a) + "," +
                                         std::to_string(e.b) + ") has incidence " +
                                         std::to_string(int(e.count)));

    // Per-region closure: each region's boundary must cross this edge an even
    // number of times.
    for (RegionId r : ids) {
      int n = 0;
      for (int k = 0; k < e.count; ++k) {
        const Facet& fc = mesh.facets[e.facet[k]];
        if (fc.back == r || fc.front == r) ++n;
      }
      if (n % 2 != 0)
        fail(Errc::open_boundary, "region " + std::to_string(r) + " boundary is open at edge (" +
                                      std::to_string(e.a) + "," + std::to_string(e.b) + ")");
    }

    // Winding consistency across manifold interface edges: the two facets of
    // one interface must traverse the shared edge in opposite directions.
    if (e.count == 2) {
      const Facet& f0 = mesh.facets[e.facet[0]];
      const Facet& f1 = mesh.facets[e.facet[1]];
      if (f0.back != f1.back || f0.front != f1.front)
        fail(Errc::open_boundary, "manifold edge shared by different interfaces");
      auto direction = [&](const Facet& fc) {
        for (int k = 0; k < 3; ++k) {
          if (fc.v[k] == e.a && fc.v[(k + 1) % 3] == e.b) return +1;
          if (fc.v[k] == e.b && fc.v[(k + 1) % 3] == e.a) return -1;
        }
        return 0;
      };
      if (direction(f0) * direction(f1) != -1)
        fail(Errc::inconsistent_orientation,
             "facets " + std::to_string(e.facet[0]) + " and " + std::to_string(e.facet[1]) +
                 " disagree across edge (" + std::to_string(e.a) + "," + std::to_string(e.b) + ")");
    }
  }

  for (RegionId r : ids)
    if (!(euclidean_region_volume(mesh, r) > 0.0))
      fail(Errc::inconsistent_orientation,
           "region " + std::to_string(r) + " has non-positive enclosed volume");
}

inline void finalize_mesh(ClusterMesh& mesh) {
  rebuild_edges(mesh);
  validate_mesh(mesh);
}

inline ClusterMesh build_cluster_mesh(std::vector<Vec3> positions, std::vector<Facet> facets,
                                      std::vector<Region> regions) {
  ClusterMesh mesh;
  mesh.positions = std::move(positions);
  mesh.facets = std::move(facets);
  mesh.regions = std::move(regions);
  finalize_mesh(mesh);
  return mesh;
}

// ---------------------------------------------------------------------------
// Topology queries

inline int euler_characteristic(const ClusterMesh& mesh) {
  std::vector<bool> used(mesh.positions.size(), false);
  for (const Facet& f : mesh.facets)
    for (VertexId v : f.v) used[v] = true;
  long nv = std::count(used.begin(), used.end(), true);
  return int(nv - long(mesh.edges.size()) + long(mesh.facets.size()));
}

// Edges where exactly three interfaces meet (the cluster's singular curves).
inline std::vector<EdgeKey> singular_edges(const ClusterMesh& mesh) {
  std::vector<EdgeKey> out;
  for (const EdgeRecord& e : mesh.edges)
    if (e.count == 3) out.push_back(EdgeKey(e.a, e.b));
  return out;
}

// Vertex classification: 0 = interior of an interface, 1 = on a singular
// curve, 2 = singular vertex (>= 3 singular edges meet there).
inline std::vector<std::uint8_t> vertex_singularity(const ClusterMesh& mesh) {
  std::vector<std::uint8_t> deg(mesh.positions.size(), 0);
  for (const EdgeRecord& e : mesh.edges)
    if (e.count == 3) {
      if (deg[e.a] < 255) ++deg[e.a];
      if (deg[e.b] < 255) ++deg[e.b];
    }
  std::vector<std::uint8_t> cls(mesh.positions.size(), 0);
  for (std::size_t v = 0; v < cls.size(); ++v)
    cls[v] = deg[v] >= 3 ? 2 : (deg[v] > 0 ? 1 : 0);
  return cls;
}

inline std::vector<VertexId> singular_vertices(const ClusterMesh& mesh) {
  std::vector<std::uint8_t> cls = vertex_singularity(mesh);
  std::vector<VertexId> out;
  for (VertexId v = 0; v < cls.size(); ++v)
    if (cls[v] == 2) out.push_back(v);
  return out;
}

// ---------------------------------------------------------------------------
// Refinement: split every facet at its edge midpoints (1 -> 4). Existing
// vertex ids are preserved; midpoint vertices are appended in edge order.

inline ClusterMesh refine(const ClusterMesh& mesh) {
  ClusterMesh out;
  out.regions = mesh.regions;
  out.positions = mesh.positions;
  out.positions.reserve(mesh.positions.size() + mesh.edges.size());
  for (const EdgeRecord& e : mesh.edges)
    out.positions.push_back(0.5 * (mesh.positions[e.a] + mesh.positions[e.b]));

  auto midpoint_id = [&](VertexId u, VertexId v) -> VertexId {
    EdgeKey key(u, v);
    auto it = std::lower_bound(mesh.edges.begin(), mesh.edges.end(), key,
                               [](const EdgeRecord& e, const EdgeKey& k) {
                                 return std::tie(e.a, e.b) < std::tie(k.a, k.b);
                               });
    return VertexId(mesh.positions.size() + std::size_t(it - mesh.edges.begin()));
  };

  out.facets.reserve(mesh.facets.size() * 4);
  for (const Facet& f : mesh.facets) {
    VertexId a = f.v[0], b = f.v[1], c = f.v[2];
    VertexId ab = midpoint_id(a, b), bc = midpoint_id(b, c), ca = midpoint_id(c, a);
    out.facets.push_back({{a, ab, ca}, f.back, f.front});
    out.facets.push_back({{b, bc, ab}, f.back, f.front});
    out.facets.push_back({{c, ca, bc}, f.back, f.front});
    out.facets.push_back({{ab, bc, ca}, f.back, f.front});
  }
  finalize_mesh(out);
  return out;
}

// ---------------------------------------------------------------------------
// Equiangulation: flip interior manifold edges when doing so strictly
// increases the minimum of the four affected triangle angles. Singular edges
// are never touched. Strict improvement bounds the number of flips.

namespace detail {

inline double min_triangle_angle(const Vec3& a, const Vec3& b, const Vec3& c) {
  double aa = angle_between(b - a, c - a);
  double ab = angle_between(a - b, c - b);
  double ac = angle_between(a - c, b - c);
  return std::min({aa, ab, ac});
}

}  // namespace detail

inline ClusterMesh equiangulate(const ClusterMesh& input) {
  ClusterMesh mesh = input;
  const std::size_t flip_cap = 10 * std::max<std::size_t>(mesh.edges.size(), 1);
  std::size_t flips_total = 0;

  bool again = true;
  while (again && flips_total < flip_cap) {
    again = false;
    rebuild_edges(mesh);
    std::vector<std::uint8_t> dirty(mesh.facets.size(), 0);
    std::vector<EdgeKey> created;  // edges introduced by flips this pass

    for (const EdgeRecord& e : mesh.edges) {
      if (e.count != 2) continue;
      FacetId fi0 = e.facet[0], fi1 = e.facet[1];
      if (dirty[fi0] || dirty[fi1]) continue;
      Facet f0 = mesh.facets[fi0], f1 = mesh.facets[fi1];
      if (f0.back != f1.back || f0.front != f1.front) continue;

      // Orient so f0 contains p->q and f1 contains q->p.
      VertexId p = e.a, q = e.b;
      auto has_ordered = [](const Facet& f, VertexId u, VertexId v) {
        for (int k = 0; k < 3; ++k)
          if (f.v[k] == u && f.v[(k + 1) % 3] == v) return true;
        return false;
      };
      if (!has_ordered(f0, p, q)) std::swap(p, q);
      if (!has_ordered(f0, p, q) || !has_ordered(f1, q, p)) continue;
      auto opposite = [](const Facet& f, VertexId u, VertexId v) {
        for (VertexId w : f.v)
          if (w != u && w != v) return w;
        return kInvalidVertex;
      };
      VertexId c = opposite(f0, p, q), d = opposite(f1, p, q);
      if (c == d || c == kInvalidVertex || d == kInvalidVertex) continue;
      // Never duplicate an edge, including those created earlier this pass
      // (the edge index is only rebuilt between passes).
      if (find_edge(mesh, EdgeKey(c, d)) != nullptr) continue;
      if (std::find(created.begin(), created.end(), EdgeKey(c, d)) != created.end()) continue;

      const Vec3 &P = mesh.positions[p], &Q = mesh.positions[q];
      const Vec3 &C = mesh.positions[c], &D = mesh.positions[d];

      double before = std::min(detail::min_triangle_angle(P, Q, C),
                               detail::min_triangle_angle(Q, P, D));
      double after = std::min(detail::min_triangle_angle(C, P, D),
                              detail::min_triangle_angle(D, Q, C));
      if (!(after > before)) continue;

      // Require the quad p-d-q-c to be convex in the plane of the average
      // normal, otherwise the flip folds the surface.
      Vec3 n = cross(Q - P, C - P) + cross(P - Q, D - Q);
      Vec3 quad[4] = {P, D, Q, C};
      bool convex = true;
      for (int k = 0; k < 4 && convex; ++k) {
        Vec3 e0 = quad[(k + 1) % 4] - quad[k];
        Vec3 e1 = quad[(k + 2) % 4] - quad[(k + 1) % 4];
        if (dot(cross(e0, e1), n) <= 0) convex = false;
      }
      if (!convex) continue;

      mesh.facets[fi0] = Facet{{c, p, d}, f0.back, f0.front};
      mesh.facets[fi1] = Facet{{d, q, c}, f0.back, f0.front};
      dirty[fi0] = dirty[fi1] = 1;
      created.push_back(EdgeKey(c, d));
      ++flips_total;
      again = true;
    }
  }
  finalize_mesh(mesh);
  return mesh;
}

// ---------------------------------------------------------------------------
// Cleanup: collapse edges much shorter than the mean edge length. Vertices on
// singular curves never leave those curves, singular vertices never move, and
// any collapse that would invert or degenerate a surviving facet is skipped.

struct CleanupResult {
  ClusterMesh mesh;
  // vertex_map[old_id] = new id, or kInvalidVertex for removed vertices.
  std::vector<VertexId> vertex_map;
  std::size_t collapsed = 0;
};

namespace detail {

// One collapse attempt on a live mesh; returns true if applied.
inline bool try_collapse(ClusterMesh& mesh, const std::vector<std::uint8_t>& cls, VertexId u,
                         VertexId v, std::uint8_t edge_count) {
  // Decide which endpoint survives and where it goes.
  VertexId keep, kill;
  bool to_midpoint = false;
  std::uint8_t cu = cls[u], cv = cls[v];
  if (edge_count == 2) {
    if (cu > 0 && cv > 0) return false;  // would pull a curve through an interface
    if (cu > 0) {
      keep = u; kill = v;
    } else if (cv > 0) {
      keep = v; kill = u;
    } else {
      keep = u; kill = v; to_midpoint = true;
    }
  } else if (edge_count == 3) {
    if (cu == 2 && cv == 2) return false;  // never merge two singular vertices
    if (cu == 2) {
      keep = u; kill = v;
    } else if (cv == 2) {
      keep = v; kill = u;
    } else {
      keep = u; kill = v; to_midpoint = true;  // slide along the curve
    }
  } else {
    return false;
  }

  // Link condition: common neighbours of u and v must be exactly the facets'
  // opposite vertices across the collapsing edge.
  std::vector<VertexId> opposite;
  std::vector<FacetId> dying, affected;
  for (FacetId f = 0; f < mesh.facets.size(); ++f) {
    const auto& w = mesh.facets[f].v;
    bool hu = (w[0] == u || w[1] == u || w[2] == u);
    bool hv = (w[0] == v || w[1] == v || w[2] == v);
    if (hu && hv) {
      dying.push_back(f);
      for (VertexId x : w)
        if (x != u && x != v) opposite.push_back(x);
    } else if (hu || hv) {
      affected.push_back(f);
    }
  }
  std::sort(opposite.begin(), opposite.end());

  std::vector<VertexId> nu, nv;
  for (const EdgeRecord& e : mesh.edges) {
    if (e.a == u) nu.push_back(e.b);
    if (e.b == u) nu.push_back(e.a);
    if (e.a == v) nv.push_back(e.b);
    if (e.b == v) nv.push_back(e.a);
  }
  std::sort(nu.begin(), nu.end());
  std::sort(nv.begin(), nv.end());
  std::vector<VertexId> common;
  std::set_intersection(nu.begin(), nu.end(), nv.begin(), nv.end(), std::back_inserter(common));
  if (common != opposite) return false;

  // Edges (u,x) and (v,x) merge; the result must stay within the incidence
  // budget after the dying facets drop out.
  for (VertexId x : common) {
    const EdgeRecord* eu = find_edge(mesh, EdgeKey(u, x));
    const EdgeRecord* ev = find_edge(mesh, EdgeKey(v, x));
    int dying_with_x = 0;
    for (FacetId fd : dying)
      for (VertexId w : mesh.facets[fd].v)
        if (w == x) ++dying_with_x;
    int merged = (eu ? eu->count : 0) + (ev ? ev->count : 0) - 2 * dying_with_x;
    if (merged > 4 || merged < 2) return false;
  }

  Vec3 new_pos = to_midpoint ? 0.5 * (mesh.positions[u] + mesh.positions[v])
                             : mesh.positions[keep];

  // Simulate surviving facets: no inverted or vanished triangles, and no
  // duplicated facets around the kept vertex.
  std::vector<std::array<VertexId, 3>> new_tris;
  for (FacetId f : affected) {
    std::array<VertexId, 3> w = mesh.facets[f].v;
    bool touches = false;
    for (VertexId& x : w)
      if (x == kill || x == keep) {
        x = keep;
        touches = true;
      }
    if (w[0] == w[1] || w[1] == w[2] || w[0] == w[2]) return false;
    if (!touches) continue;
    auto pos = [&](VertexId x) { return x == keep ? new_pos : mesh.positions[x]; };
    Vec3 old_n = mesh.facet_area_vector(f);
    Vec3 new_n = 0.5 * cross(pos(w[1]) - pos(w[0]), pos(w[2]) - pos(w[0]));
    if (!(norm(new_n) > 0.0)) return false;
    if (dot(old_n, new_n) <= 0.0) return false;  // orientation would flip
    new_tris.push_back(w);
  }
  for (auto& t : new_tris) std::sort(t.begin(), t.end());
  std::sort(new_tris.begin(), new_tris.end());
  if (std::adjacent_find(new_tris.begin(), new_tris.end()) != new_tris.end()) return false;

  // Apply.
  mesh.positions[keep] = new_pos;
  for (FacetId f : affected)
    for (VertexId& x : mesh.facets[f].v)
      if (x == kill) x = keep;
  std::sort(dying.begin(), dying.end(), std::greater<FacetId>());
  for (FacetId f : dying) mesh.facets.erase(mesh.facets.begin() + f);
  return true;
}

}  // namespace detail

inline CleanupResult cleanup(const ClusterMesh& input, double min_edge_fraction) {
  if (!(min_edge_fraction >= 0))
    fail(Errc::invalid_parameter, "min_edge_fraction must be >= 0");
  ClusterMesh mesh = input;
  std::size_t collapsed = 0;

  for (int pass = 0; pass < 8; ++pass) {
    rebuild_edges(mesh);
    double mean_len = 0;
    for (const EdgeRecord& e : mesh.edges)
      mean_len += distance(mesh.positions[e.a], mesh.positions[e.b]);
    mean_len /= std::max<std::size_t>(mesh.edges.size(), 1);
    double threshold = min_edge_fraction * mean_len;

    struct Candidate {
      double len;
      VertexId a, b;
      std::uint8_t count;
    };
    std::vector<Candidate> cands;
    for (const EdgeRecord& e : mesh.edges) {
      double len = distance(mesh.positions[e.a], mesh.positions[e.b]);
      if (len < threshold) cands.push_back({len, e.a, e.b, e.count});
    }
    std::sort(cands.begin(), cands.end(), [](const Candidate& l, const Candidate& r) {
      return std::tie(l.len, l.a, l.b) < std::tie(r.len, r.a, r.b);
    });
    if (cands.empty()) break;

    std::vector<std::uint8_t> cls = vertex_singularity(mesh);
    std::vector<std::uint8_t> touched(mesh.positions.size(), 0);
    std::size_t done_this_pass = 0;
    for (const Candidate& c : cands) {
      if (touched[c.a] || touched[c.b]) continue;
      if (detail::try_collapse(mesh, cls, c.a, c.b, c.count)) {
        touched[c.a] = touched[c.b] = 1;
        ++done_this_pass;
        ++collapsed;
        rebuild_edges(mesh);  // incidence changed around the collapse
      }
    }
    if (done_this_pass == 0) break;
  }

  // Compact unused vertices and report the mapping.
  CleanupResult result;
  result.collapsed = collapsed;
  result.vertex_map.assign(mesh.positions.size(), kInvalidVertex);
  std::vector<bool> used(mesh.positions.size(), false);
  for (const Facet& f : mesh.facets)
    for (VertexId v : f.v) used[v] = true;
  std::vector<Vec3> compact;
  compact.reserve(mesh.positions.size());
  for (VertexId v = 0; v < mesh.positions.size(); ++v)
    if (used[v]) {
      result.vertex_map[v] = VertexId(compact.size());
      compact.push_back(mesh.positions[v]);
    }
  for (Facet& f : mesh.facets)
    for (VertexId& v : f.v) v = result.vertex_map[v];
  mesh.positions = std::move(compact);

  finalize_mesh(mesh);
  result.mesh = std::move(mesh);
  return result;
}

// ---------------------------------------------------------------------------
// OBJ export: one group per unordered region pair, vertices with 17
// significant digits, facets in index order within each group.

inline void write_obj(const ClusterMesh& mesh, std::ostream& os) {
  char buf[96];
  os << "# bubblelab cluster mesh\n";
  for (const Vec3& p : mesh.positions) {
    std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", p.x, p.y, p.z);
    os << buf;
  }
  std::map<std::pair<RegionId, RegionId>, std::vector<FacetId>> groups;
  for (FacetId f = 0; f < mesh.facets.size(); ++f) {
    const Facet& fc = mesh.facets[f];
    groups[{fc.back, fc.front}].push_back(f);
  }
  for (const auto& [key, list] : groups) {
    os << "g interface_" << key.first << "_" << key.second << "\n";
    for (FacetId f : list) {
      const auto& v = mesh.facets[f].v;
      os << "f " << v[0] + 1 << " " << v[1] + 1 << " " << v[2] + 1 << "\n";
    }
  }
}

}  // namespace bubbles
