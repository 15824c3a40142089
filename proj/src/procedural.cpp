#include "breptok/procedural.hpp"

#include <algorithm>
#include <cmath>

#include "breptok/errors.hpp"
#include "breptok/rng.hpp"

namespace breptok {

namespace {

constexpr double kPi = 3.14159265358979323846;

double tparam(int i, int n) { return static_cast<double>(i) / static_cast<double>(n - 1); }

Point3 lerp(const Point3& a, const Point3& b, double t) {
    return {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t, a.z + (b.z - a.z) * t};
}

// Bilinear quad face over corners c00 (u=0,v=0), c10, c01, c11.
FaceGeom quad_face(const Point3& c00, const Point3& c10, const Point3& c01, const Point3& c11) {
    FaceGeom face;
    for (int u = 0; u < kGridN; ++u) {
        const double s = tparam(u, kGridN);
        const Point3 left = lerp(c00, c10, s);
        const Point3 right = lerp(c01, c11, s);
        for (int v = 0; v < kGridN; ++v) face.at(u, v) = lerp(left, right, tparam(v, kGridN));
    }
    return face;
}

EdgeGeom line_edge(const Point3& a, const Point3& b, int fa, int fb) {
    EdgeGeom e;
    for (int i = 0; i < kEdgeSamples; ++i) e.polyline[static_cast<size_t>(i)] = lerp(a, b, tparam(i, kEdgeSamples));
    e.face_a = fa;
    e.face_b = fb;
    return e;
}

// Walks the closed boundary polygon by arc length; t in [0, 1] covers the
// full perimeter starting at loop[0].
struct BoundaryWalker {
    std::vector<Point3> pts;
    std::vector<double> cum;  // cumulative length, cum[0] = 0
    double total = 0.0;

    explicit BoundaryWalker(std::vector<Point3> loop) : pts(std::move(loop)) {
        cum.resize(pts.size() + 1, 0.0);
        for (size_t i = 0; i < pts.size(); ++i) {
            const Point3& a = pts[i];
            const Point3& b = pts[(i + 1) % pts.size()];
            cum[i + 1] = cum[i] + dist(a, b);
        }
        total = cum.back();
    }

    Point3 at(double t) const {
        const double s = std::clamp(t, 0.0, 1.0) * total;
        size_t seg = 0;
        while (seg + 1 < pts.size() && cum[seg + 1] < s) ++seg;
        const double len = cum[seg + 1] - cum[seg];
        const double local = len > 0 ? (s - cum[seg]) / len : 0.0;
        return lerp(pts[seg], pts[(seg + 1) % pts.size()], local);
    }
};

// Star-shaped cap: rays from an interior kernel point to the boundary walk.
FaceGeom fan_face(const Point3& center, const BoundaryWalker& boundary) {
    FaceGeom face;
    for (int v = 0; v < kGridN; ++v) {
        const Point3 rim = boundary.at(tparam(v, kGridN));
        for (int u = 0; u < kGridN; ++u) face.at(u, v) = lerp(center, rim, tparam(u, kGridN));
    }
    return face;
}

EdgeGeom arc_edge(double radius, double z, double theta0, double theta1, int fa, int fb) {
    EdgeGeom e;
    for (int i = 0; i < kEdgeSamples; ++i) {
        const double th = theta0 + (theta1 - theta0) * tparam(i, kEdgeSamples);
        e.polyline[static_cast<size_t>(i)] = {radius * std::cos(th), radius * std::sin(th), z};
    }
    e.face_a = fa;
    e.face_b = fb;
    return e;
}

void scale_into_extent(SolidModel& solid, double extent) {
    double max_abs = 0.0;
    for (const FaceGeom& f : solid.faces)
        for (const Point3& p : f.grid)
            max_abs = std::max({max_abs, std::fabs(p.x), std::fabs(p.y), std::fabs(p.z)});
    for (const EdgeGeom& e : solid.edges)
        for (const Point3& p : e.polyline)
            max_abs = std::max({max_abs, std::fabs(p.x), std::fabs(p.y), std::fabs(p.z)});
    if (max_abs <= 0.0) throw ParamError("degenerate solid with zero extent");
    const double s = extent / max_abs;
    for (FaceGeom& f : solid.faces)
        for (Point3& p : f.grid) p = p * s;
    for (EdgeGeom& e : solid.edges)
        for (Point3& p : e.polyline) p = p * s;
}

Procedural make_box(double sx, double sy, double sz, double extent) {
    if (sx <= 0 || sy <= 0 || sz <= 0) throw ParamError("box dimensions must be positive");
    const double hx = sx / 2, hy = sy / 2, hz = sz / 2;
    auto corner = [&](int ix, int iy, int iz) -> Point3 {
        return {ix ? hx : -hx, iy ? hy : -hy, iz ? hz : -hz};
    };

    SolidModel solid;
    // face order: x-, x+, y-, y+, z-, z+
    solid.faces.push_back(quad_face(corner(0, 0, 0), corner(0, 1, 0), corner(0, 0, 1), corner(0, 1, 1)));
    solid.faces.push_back(quad_face(corner(1, 0, 0), corner(1, 1, 0), corner(1, 0, 1), corner(1, 1, 1)));
    solid.faces.push_back(quad_face(corner(0, 0, 0), corner(1, 0, 0), corner(0, 0, 1), corner(1, 0, 1)));
    solid.faces.push_back(quad_face(corner(0, 1, 0), corner(1, 1, 0), corner(0, 1, 1), corner(1, 1, 1)));
    solid.faces.push_back(quad_face(corner(0, 0, 0), corner(1, 0, 0), corner(0, 1, 0), corner(1, 1, 0)));
    solid.faces.push_back(quad_face(corner(0, 0, 1), corner(1, 0, 1), corner(0, 1, 1), corner(1, 1, 1)));

    const int XM = 0, XP = 1, YM = 2, YP = 3, ZM = 4, ZP = 5;
    // 4 edges around z-, 4 around z+, 4 vertical
    solid.edges.push_back(line_edge(corner(0, 0, 0), corner(1, 0, 0), YM, ZM));
    solid.edges.push_back(line_edge(corner(0, 1, 0), corner(1, 1, 0), YP, ZM));
    solid.edges.push_back(line_edge(corner(0, 0, 0), corner(0, 1, 0), XM, ZM));
    solid.edges.push_back(line_edge(corner(1, 0, 0), corner(1, 1, 0), XP, ZM));
    solid.edges.push_back(line_edge(corner(0, 0, 1), corner(1, 0, 1), YM, ZP));
    solid.edges.push_back(line_edge(corner(0, 1, 1), corner(1, 1, 1), YP, ZP));
    solid.edges.push_back(line_edge(corner(0, 0, 1), corner(0, 1, 1), XM, ZP));
    solid.edges.push_back(line_edge(corner(1, 0, 1), corner(1, 1, 1), XP, ZP));
    solid.edges.push_back(line_edge(corner(0, 0, 0), corner(0, 0, 1), XM, YM));
    solid.edges.push_back(line_edge(corner(1, 0, 0), corner(1, 0, 1), XP, YM));
    solid.edges.push_back(line_edge(corner(0, 1, 0), corner(0, 1, 1), XM, YP));
    solid.edges.push_back(line_edge(corner(1, 1, 0), corner(1, 1, 1), XP, YP));

    scale_into_extent(solid, extent);
    return {std::move(solid), {8, 12, 6}};
}

// Prism over a closed convex-or-star polygon; faces are [sides..., top, bottom].
Procedural make_polygon_prism(const std::vector<Point3>& base, const Point3& kernel,
                              double height, double extent) {
    const int n = static_cast<int>(base.size());
    const double hz = height / 2;
    auto lift = [&](const Point3& p, double z) -> Point3 { return {p.x, p.y, z}; };

    SolidModel solid;
    for (int i = 0; i < n; ++i) {
        const Point3& a = base[static_cast<size_t>(i)];
        const Point3& b = base[static_cast<size_t>((i + 1) % n)];
        solid.faces.push_back(quad_face(lift(a, -hz), lift(b, -hz), lift(a, hz), lift(b, hz)));
    }
    const int top = n, bottom = n + 1;
    std::vector<Point3> top_loop, bottom_loop;
    for (const Point3& p : base) {
        top_loop.push_back(lift(p, hz));
        bottom_loop.push_back(lift(p, -hz));
    }
    solid.faces.push_back(fan_face(lift(kernel, hz), BoundaryWalker(top_loop)));
    solid.faces.push_back(fan_face(lift(kernel, -hz), BoundaryWalker(bottom_loop)));

    for (int i = 0; i < n; ++i) {
        const int prev_side = (i + n - 1) % n;
        solid.edges.push_back(line_edge(lift(base[static_cast<size_t>(i)], -hz),
                                        lift(base[static_cast<size_t>(i)], hz), prev_side, i));
    }
    for (int i = 0; i < n; ++i)
        solid.edges.push_back(line_edge(lift(base[static_cast<size_t>(i)], hz),
                                        lift(base[static_cast<size_t>((i + 1) % n)], hz), i, top));
    for (int i = 0; i < n; ++i)
        solid.edges.push_back(line_edge(lift(base[static_cast<size_t>(i)], -hz),
                                        lift(base[static_cast<size_t>((i + 1) % n)], -hz), i, bottom));

    scale_into_extent(solid, extent);
    return {std::move(solid), {2 * n, 3 * n, n + 2}};
}

Procedural make_prism(int n, double radius, double height, double extent) {
    if (n < 3) throw ParamError("prism needs at least 3 sides");
    if (radius <= 0 || height <= 0) throw ParamError("prism dimensions must be positive");
    std::vector<Point3> base;
    for (int i = 0; i < n; ++i) {
        const double th = 2.0 * kPi * i / n;
        base.push_back({radius * std::cos(th), radius * std::sin(th), 0.0});
    }
    return make_polygon_prism(base, {0, 0, 0}, height, extent);
}

Procedural make_l_bracket(double a, double b, double ta, double tb, double h, double extent) {
    if (a <= 0 || b <= 0 || ta <= 0 || tb <= 0 || h <= 0)
        throw ParamError("l_bracket dimensions must be positive");
    if (ta >= a || tb >= b) throw ParamError("l_bracket thickness must be below the arm length");
    // L cross-section, counterclockwise, recentered around the arm box
    const double cx = a / 2, cy = b / 2;
    std::vector<Point3> base = {
        {-cx, -cy, 0}, {a - cx, -cy, 0}, {a - cx, tb - cy, 0},
        {ta - cx, tb - cy, 0}, {ta - cx, b - cy, 0}, {-cx, b - cy, 0},
    };
    // kernel of the L: the corner square shared by both arms
    const Point3 kernel = {ta / 2 - cx, tb / 2 - cy, 0};
    return make_polygon_prism(base, kernel, h, extent);
}

Procedural make_cylinder(double radius, double height, double extent) {
    if (radius <= 0 || height <= 0) throw ParamError("cylinder dimensions must be positive");
    const double hz = height / 2;

    SolidModel solid;
    const int CAP_T = 0, CAP_B = 1, LAT_A = 2, LAT_B = 3;
    // caps: polar grids over the full disc
    for (const double z : {hz, -hz}) {
        FaceGeom cap;
        for (int v = 0; v < kGridN; ++v) {
            const double th = 2.0 * kPi * tparam(v, kGridN);
            const Point3 rim = {radius * std::cos(th), radius * std::sin(th), z};
            for (int u = 0; u < kGridN; ++u) cap.at(u, v) = lerp({0, 0, z}, rim, tparam(u, kGridN));
        }
        solid.faces.push_back(cap);
    }
    // lateral surface split along its seams into two half shells
    for (const double th0 : {0.0, kPi}) {
        FaceGeom lat;
        for (int u = 0; u < kGridN; ++u) {
            const double th = th0 + kPi * tparam(u, kGridN);
            for (int v = 0; v < kGridN; ++v) {
                const double z = -hz + height * tparam(v, kGridN);
                lat.at(u, v) = {radius * std::cos(th), radius * std::sin(th), z};
            }
        }
        solid.faces.push_back(lat);
    }

    solid.edges.push_back(arc_edge(radius, hz, 0.0, kPi, CAP_T, LAT_A));
    solid.edges.push_back(arc_edge(radius, hz, kPi, 2.0 * kPi, CAP_T, LAT_B));
    solid.edges.push_back(arc_edge(radius, -hz, 0.0, kPi, CAP_B, LAT_A));
    solid.edges.push_back(arc_edge(radius, -hz, kPi, 2.0 * kPi, CAP_B, LAT_B));
    solid.edges.push_back(line_edge({radius, 0, -hz}, {radius, 0, hz}, LAT_A, LAT_B));
    solid.edges.push_back(line_edge({-radius, 0, -hz}, {-radius, 0, hz}, LAT_A, LAT_B));

    scale_into_extent(solid, extent);
    return {std::move(solid), {4, 6, 4}};
}

double jittered(double value, double jitter, Rng& rng) {
    if (jitter <= 0) return value;
    return value * (1.0 + jitter * (2.0 * rng.uniform() - 1.0));
}

}  // namespace

const char* kind_name(SolidKind kind) {
    switch (kind) {
        case SolidKind::box: return "box";
        case SolidKind::n_prism: return "n_prism";
        case SolidKind::cylinder_approx: return "cylinder_approx";
        case SolidKind::l_bracket: return "l_bracket";
    }
    return "?";
}

SolidKind kind_from_name(const std::string& name) {
    if (name == "box") return SolidKind::box;
    if (name == "n_prism") return SolidKind::n_prism;
    if (name == "cylinder_approx") return SolidKind::cylinder_approx;
    if (name == "l_bracket") return SolidKind::l_bracket;
    throw ParamError("unknown solid kind '" + name + "'");
}

Procedural generate_procedural(SolidKind kind, const ProcParams& params, uint64_t seed) {
    if (params.extent <= 0 || params.extent >= 1)
        throw ParamError("extent must lie strictly inside (0, 1)");
    Rng rng(seed);
    const double j = params.jitter;
    switch (kind) {
        case SolidKind::box:
            return make_box(jittered(params.sx, j, rng), jittered(params.sy, j, rng),
                            jittered(params.sz, j, rng), params.extent);
        case SolidKind::n_prism:
            return make_prism(params.sides, jittered(params.radius, j, rng),
                              jittered(params.height, j, rng), params.extent);
        case SolidKind::cylinder_approx:
            return make_cylinder(jittered(params.radius, j, rng),
                                 jittered(params.height, j, rng), params.extent);
        case SolidKind::l_bracket: {
            const double a = jittered(params.arm_a, j, rng);
            const double b = jittered(params.arm_b, j, rng);
            const double ta = std::min(jittered(params.thick_a, j, rng), 0.9 * a);
            const double tb = std::min(jittered(params.thick_b, j, rng), 0.9 * b);
            return make_l_bracket(a, b, ta, tb, jittered(params.sz, j, rng), params.extent);
        }
    }
    throw ParamError("unknown solid kind");
}

KindMix parse_kind_mix(const std::string& text) {
    KindMix mix;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        const std::string item = text.substr(pos, comma - pos);
        const size_t colon = item.find(':');
        if (colon == std::string::npos) throw ParamError("kind-mix item '" + item + "' needs kind:weight");
        const SolidKind kind = kind_from_name(item.substr(0, colon));
        const double w = std::stod(item.substr(colon + 1));
        if (w < 0) throw ParamError("kind-mix weight must be nonnegative");
        mix.weights.emplace_back(kind, w);
        pos = comma + 1;
    }
    if (mix.weights.empty()) throw ParamError("empty kind mix");
    double total = 0;
    for (auto& [k, w] : mix.weights) total += w;
    if (total <= 0) throw ParamError("kind-mix weights sum to zero");
    for (auto& [k, w] : mix.weights) w /= total;
    return mix;
}

std::vector<Procedural> generate_corpus(const CorpusSpec& spec) {
    std::vector<Procedural> out;
    out.reserve(static_cast<size_t>(spec.count));
    for (int i = 0; i < spec.count; ++i) {
        const uint64_t item_seed = Rng::derive(spec.seed, static_cast<uint64_t>(i));
        Rng rng(item_seed);
        // pick the kind from the mix
        double u = rng.uniform();
        SolidKind kind = spec.mix.weights.back().first;
        for (const auto& [k, w] : spec.mix.weights) {
            if (u < w) {
                kind = k;
                break;
            }
            u -= w;
        }
        ProcParams params;
        params.jitter = spec.jitter;
        if (kind == SolidKind::n_prism) params.sides = 3 + static_cast<int>(rng.bounded(6));
        Procedural item = generate_procedural(kind, params, Rng::derive(item_seed, 1));
        if (spec.n_classes > 0)
            item.solid.class_label = static_cast<int>(kind) % spec.n_classes;
        out.push_back(std::move(item));
    }
    return out;
}

}  // namespace breptok
