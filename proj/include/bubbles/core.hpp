#pragma once

// Small vector types, error plumbing and dense numeric helpers shared by the
// rest of the library. Everything here is deliberately dependency-free.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace bubbles {

// ---------------------------------------------------------------------------
// Errors

enum class Errc {
  degenerate_facet,
  open_boundary,
  bad_region_label,
  bad_edge_incidence,
  inconsistent_orientation,
  degenerate_triangle,
  origin_singularity,
  singular_gram,
  no_convergence,
  unsupported_topology,
  invalid_parameter,
  parse_error,
  mismatch,
  io_error,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::degenerate_facet: return "DegenerateFacet";
    case Errc::open_boundary: return "OpenBoundary";
    case Errc::bad_region_label: return "BadRegionLabel";
    case Errc::bad_edge_incidence: return "BadEdgeIncidence";
    case Errc::inconsistent_orientation: return "InconsistentOrientation";
    case Errc::degenerate_triangle: return "DegenerateTriangle";
    case Errc::origin_singularity: return "OriginSingularity";
    case Errc::singular_gram: return "SingularGram";
    case Errc::no_convergence: return "NoConvergence";
    case Errc::unsupported_topology: return "UnsupportedTopology";
    case Errc::invalid_parameter: return "InvalidParameter";
    case Errc::parse_error: return "ParseError";
    case Errc::mismatch: return "Mismatch";
    case Errc::io_error: return "IoError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

// ---------------------------------------------------------------------------
// 3D vectors

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
};

inline Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
inline Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
inline Vec3 operator*(Vec3 a, double s) { return a *= s; }
inline Vec3 operator*(double s, Vec3 a) { return a *= s; }
inline Vec3 operator/(Vec3 a, double s) { return a *= (1.0 / s); }
inline Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }

inline double dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm2(const Vec3& a) { return dot(a, a); }
inline double norm(const Vec3& a) { return std::sqrt(norm2(a)); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

inline Vec3 normalized(const Vec3& a) {
  double n = norm(a);
  if (n == 0.0) fail(Errc::invalid_parameter, "cannot normalize zero vector");
  return a / n;
}

// Some unit vector orthogonal to a.
inline Vec3 any_perpendicular(const Vec3& a) {
  Vec3 t = std::abs(a.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  return normalized(cross(a, t));
}

// Angle between two vectors in [0, pi], stable near 0 and pi.
inline double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(norm(cross(a, b)), dot(a, b));
}

// ---------------------------------------------------------------------------
// 3x3 matrices and rigid motions

struct Mat3 {
  // Row-major.
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  static Mat3 identity() { return Mat3{}; }

  static Mat3 axis_angle(const Vec3& axis, double angle) {
    Vec3 u = normalized(axis);
    double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
    return Mat3{{t * u.x * u.x + c,       t * u.x * u.y - s * u.z, t * u.x * u.z + s * u.y,
                 t * u.x * u.y + s * u.z, t * u.y * u.y + c,       t * u.y * u.z - s * u.x,
                 t * u.x * u.z - s * u.y, t * u.y * u.z + s * u.x, t * u.z * u.z + c}};
  }

  Vec3 operator*(const Vec3& v) const {
    return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
            m[3] * v.x + m[4] * v.y + m[5] * v.z,
            m[6] * v.x + m[7] * v.y + m[8] * v.z};
  }

  Mat3 operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0;
        for (int k = 0; k < 3; ++k) s += m[3 * i + k] * o.m[3 * k + j];
        r.m[3 * i + j] = s;
      }
    return r;
  }
};

struct RigidTransform {
  Mat3 rotation = Mat3::identity();
  Vec3 translation{};

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }

  static RigidTransform translate(const Vec3& t) { return {Mat3::identity(), t}; }
  static RigidTransform rotate(const Vec3& axis, double angle) {
    return {Mat3::axis_angle(axis, angle), Vec3{}};
  }

  // Composition: first `this`, then `second`.
  RigidTransform then(const RigidTransform& second) const {
    return {second.rotation * rotation, second.rotation * translation + second.translation};
  }
};

// ---------------------------------------------------------------------------
// Small dense linear algebra (constraint systems are at most a few unknowns)

// Solve A x = b for n x n row-major A by Gaussian elimination with partial
// pivoting. Returns false if the pivot collapses.
inline bool solve_dense(std::vector<double> a, std::vector<double> b, int n,
                        std::vector<double>& x) {
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    if (a[piv * n + col] == 0.0) return false;
    if (piv != col) {
      for (int c = 0; c < n; ++c) std::swap(a[col * n + c], a[piv * n + c]);
      std::swap(b[col], b[piv]);
    }
    double d = a[col * n + col];
    for (int r = col + 1; r < n; ++r) {
      double f = a[r * n + col] / d;
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      b[r] -= f * b[col];
    }
  }
  x.assign(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < n; ++c) s -= a[r * n + c] * x[c];
    x[r] = s / a[r * n + r];
  }
  return true;
}

// Eigenvalues of a small symmetric matrix by cyclic Jacobi sweeps.
inline std::vector<double> symmetric_eigenvalues(std::vector<double> a, int n) {
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += a[i * n + j] * a[i * n + j];
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        double apq = a[p * n + q];
        if (apq == 0.0) continue;
        double theta = (a[q * n + q] - a[p * n + p]) / (2 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1));
        double c = 1.0 / std::sqrt(t * t + 1), s = t * c;
        for (int k = 0; k < n; ++k) {
          double akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = a[i * n + i];
  return ev;
}

// ---------------------------------------------------------------------------
// Deterministic RNG (identical stream on every platform)

struct SplitMix64 {
  std::uint64_t state = 0x9e3779b97f4a7c15ull;

  explicit SplitMix64(std::uint64_t seed = 1) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return double(next() >> 11) * 0x1p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

// ---------------------------------------------------------------------------
// Distances to primitives

inline double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  Vec3 ab = b - a;
  double denom = norm2(ab);
  double t = denom > 0 ? dot(p - a, ab) / denom : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, a + t * ab);
}

// Closest distance from p to triangle abc (Ericson, Real-Time Collision
// Detection, 5.1.5).
inline double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b,
                                      const Vec3& c) {
  Vec3 ab = b - a, ac = c - a, ap = p - a;
  double d1 = dot(ab, ap), d2 = dot(ac, ap);
  if (d1 <= 0 && d2 <= 0) return distance(p, a);

  Vec3 bp = p - b;
  double d3 = dot(ab, bp), d4 = dot(ac, bp);
  if (d3 >= 0 && d4 <= d3) return distance(p, b);

  double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) {
    double v = d1 / (d1 - d3);
    return distance(p, a + v * ab);
  }

  Vec3 cp = p - c;
  double d5 = dot(ab, cp), d6 = dot(ac, cp);
  if (d6 >= 0 && d5 <= d6) return distance(p, c);

  double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) {
    double w = d2 / (d2 - d6);
    return distance(p, a + w * ac);
  }

  double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) {
    double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return distance(p, b + w * (c - b));
  }

  double denom = 1.0 / (va + vb + vc);
  double v = vb * denom, w = vc * denom;
  return distance(p, a + v * ab + w * ac);
}

// ---------------------------------------------------------------------------
// Least-squares sphere fit: minimizes sum((|x-c|^2 - R^2)^2), linear in
// (c, R^2 - |c|^2).

struct SphereFit {
  Vec3 center{};
  double radius = 0;
};

inline SphereFit fit_sphere_least_squares(const std::vector<Vec3>& pts) {
  if (pts.size() < 4) fail(Errc::invalid_parameter, "sphere fit needs >= 4 points");
  std::vector<double> a(16, 0.0), b(4, 0.0), sol;
  for (const Vec3& p : pts) {
    double row[4] = {2 * p.x, 2 * p.y, 2 * p.z, 1.0};
    double rhs = norm2(p);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) a[i * 4 + j] += row[i] * row[j];
      b[i] += row[i] * rhs;
    }
  }
  if (!solve_dense(a, b, 4, sol))
    fail(Errc::no_convergence, "degenerate sphere fit");
  Vec3 c{sol[0], sol[1], sol[2]};
  double r2 = sol[3] + norm2(c);
  SphereFit fit;
  fit.center = c;
  fit.radius = r2 > 0 ? std::sqrt(r2) : 0.0;
  return fit;
}

}  // namespace bubbles
