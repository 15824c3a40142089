#include "breptok/model.hpp"

#include <algorithm>
#include <limits>

#include "breptok/errors.hpp"

namespace breptok {

namespace {

template <typename It>
Bbox bbox_of_range(It first, It last) {
    Bbox box;
    for (int a = 0; a < 3; ++a) {
        box.b[a] = std::numeric_limits<double>::infinity();
        box.b[a + 3] = -std::numeric_limits<double>::infinity();
    }
    for (It it = first; it != last; ++it) {
        const Point3& p = *it;
        if (!is_finite(p)) throw NonFiniteGeometry("sample contains NaN/inf");
        box.b[0] = std::min(box.b[0], p.x);
        box.b[1] = std::min(box.b[1], p.y);
        box.b[2] = std::min(box.b[2], p.z);
        box.b[3] = std::max(box.b[3], p.x);
        box.b[4] = std::max(box.b[4], p.y);
        box.b[5] = std::max(box.b[5], p.z);
    }
    return box;
}

}  // namespace

Bbox compute_bbox(const FaceGeom& face) {
    return bbox_of_range(face.grid.begin(), face.grid.end());
}

Bbox compute_bbox(const EdgeGeom& edge) {
    return bbox_of_range(edge.polyline.begin(), edge.polyline.end());
}

Point3 face_centroid(const FaceGeom& face) {
    Point3 c;
    for (const Point3& p : face.grid) c = c + p;
    return c * (1.0 / kGridSize);
}

FaceAdjacency face_adjacency(const SolidModel& solid) {
    const int nf = static_cast<int>(solid.faces.size());
    FaceAdjacency adj;
    adj.neighbors.assign(nf, {});
    adj.degree.assign(nf, 0);
    for (const EdgeGeom& e : solid.edges) {
        adj.degree[e.face_a] += 1;
        adj.degree[e.face_b] += 1;
        adj.neighbors[e.face_a].push_back(e.face_b);
        adj.neighbors[e.face_b].push_back(e.face_a);
    }
    for (auto& nbrs : adj.neighbors) {
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    }
    return adj;
}

SolidCheck validate_solid(const SolidModel& solid, int n_max) {
    SolidCheck check;
    const int nf = static_cast<int>(solid.faces.size());
    if (nf == 0) check.errors.push_back("solid has no faces");
    if (nf > n_max)
        check.errors.push_back("face count " + std::to_string(nf) + " exceeds n_max " +
                               std::to_string(n_max));
    for (size_t fi = 0; fi < solid.faces.size(); ++fi) {
        for (const Point3& p : solid.faces[fi].grid) {
            if (!is_finite(p)) {
                check.errors.push_back("face " + std::to_string(fi) + " has non-finite samples");
                break;
            }
        }
    }
    for (size_t ei = 0; ei < solid.edges.size(); ++ei) {
        const EdgeGeom& e = solid.edges[ei];
        const std::string tag = "edge " + std::to_string(ei);
        if (e.face_a < 0 || e.face_a >= nf || e.face_b < 0 || e.face_b >= nf) {
            check.errors.push_back(tag + " references a missing face");
            continue;
        }
        if (e.face_a == e.face_b)
            check.errors.push_back(tag + " borders the same face on both sides");
        bool finite = true;
        for (const Point3& p : e.polyline) finite = finite && is_finite(p);
        if (!finite) {
            check.errors.push_back(tag + " has non-finite samples");
            continue;
        }
        if (dist(e.polyline.front(), e.polyline.back()) < kMinEndpointSeparation)
            check.errors.push_back(tag + " endpoints coincide (seam not split)");
    }
    if (check.errors.empty() && nf > 0) {
        const FaceAdjacency adj = face_adjacency(solid);
        std::vector<char> seen(nf, 0);
        std::vector<int> stack = {0};
        seen[0] = 1;
        int count = 1;
        while (!stack.empty()) {
            const int f = stack.back();
            stack.pop_back();
            for (int nb : adj.neighbors[f]) {
                if (!seen[nb]) {
                    seen[nb] = 1;
                    ++count;
                    stack.push_back(nb);
                }
            }
        }
        if (count != nf) check.warnings.push_back("face adjacency graph is disconnected");
    }
    return check;
}

}  // namespace breptok
