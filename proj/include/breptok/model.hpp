#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace breptok {

// Faces carry a 32x32 UV sample grid, edges a 32-point polyline.
constexpr int kGridN = 32;
constexpr int kGridSize = kGridN * kGridN;
constexpr int kEdgeSamples = 32;

// Minimum separation between the two endpoints of an edge (seam rule).
constexpr double kMinEndpointSeparation = 1e-9;

struct Point3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Point3 operator+(const Point3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Point3 operator-(const Point3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Point3 operator*(double s) const { return {x * s, y * s, z * s}; }
    bool operator==(const Point3& o) const = default;
};

inline bool is_finite(const Point3& p) {
    return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

inline double dist2(const Point3& a, const Point3& b) {
    const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return dx * dx + dy * dy + dz * dz;
}

inline double dist(const Point3& a, const Point3& b) { return std::sqrt(dist2(a, b)); }

inline Point3 cross(const Point3& a, const Point3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Point3& p) { return std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z); }

// Regular UV sample grid of one face, row-major over (u, v).
struct FaceGeom {
    std::array<Point3, kGridSize> grid{};

    Point3& at(int u, int v) { return grid[static_cast<size_t>(u) * kGridN + v]; }
    const Point3& at(int u, int v) const { return grid[static_cast<size_t>(u) * kGridN + v]; }
};

// Uniform samples along an edge plus the two faces it separates.
struct EdgeGeom {
    std::array<Point3, kEdgeSamples> polyline{};
    int face_a = -1;
    int face_b = -1;
};

// [x_min, y_min, z_min, x_max, y_max, z_max], all in [-1, 1].
struct Bbox {
    std::array<double, 6> b{};

    double min(int axis) const { return b[static_cast<size_t>(axis)]; }
    double max(int axis) const { return b[static_cast<size_t>(axis) + 3]; }
};

struct SolidModel {
    std::vector<FaceGeom> faces;
    std::vector<EdgeGeom> edges;
    std::optional<int> class_label;
};

Bbox compute_bbox(const FaceGeom& face);
Bbox compute_bbox(const EdgeGeom& edge);

Point3 face_centroid(const FaceGeom& face);

// Neighbor sets are deduplicated; degree counts incident edges, so a pair of
// faces joined by two edges contributes 2 to each degree but one neighbor.
struct FaceAdjacency {
    std::vector<std::vector<int>> neighbors;  // sorted, unique
    std::vector<int> degree;                  // incident edge count
};

FaceAdjacency face_adjacency(const SolidModel& solid);

struct SolidCheck {
    std::vector<std::string> errors;
    std::vector<std::string> warnings;  // e.g. disconnected adjacency graph
    bool ok() const { return errors.empty(); }
};

SolidCheck validate_solid(const SolidModel& solid, int n_max = 50);

}  // namespace breptok
