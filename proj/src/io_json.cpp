#include "breptok/io_json.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "breptok/errors.hpp"
#include "breptok/version.hpp"

namespace breptok {

using nlohmann::json;

namespace {

Point3 parse_point(const json& j, const char* where) {
    if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() ||
        !j[2].is_number())
        throw SchemaError(std::string(where) + ": point must be [x, y, z]");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json dump_point(const Point3& p) { return json::array({p.x, p.y, p.z}); }

}  // namespace

SolidModel load_solid(const std::string& bytes, int n_max) {
    json j;
    try {
        j = json::parse(bytes);
    } catch (const json::exception& e) {
        throw ParseError(e.what());
    }
    if (!j.is_object() || !j.contains("faces") || !j.contains("edges"))
        throw SchemaError("solid must be an object with 'faces' and 'edges'");

    SolidModel solid;
    const json& faces = j["faces"];
    if (!faces.is_array()) throw SchemaError("'faces' must be an array");
    for (size_t fi = 0; fi < faces.size(); ++fi) {
        const json& rows = faces[fi];
        if (!rows.is_array() || rows.size() != kGridN)
            throw SchemaError("face " + std::to_string(fi) + ": expected " +
                              std::to_string(kGridN) + " rows");
        FaceGeom face;
        for (int u = 0; u < kGridN; ++u) {
            const json& row = rows[static_cast<size_t>(u)];
            if (!row.is_array() || row.size() != kGridN)
                throw SchemaError("face " + std::to_string(fi) + ": expected " +
                                  std::to_string(kGridN) + " points per row");
            for (int v = 0; v < kGridN; ++v)
                face.at(u, v) = parse_point(row[static_cast<size_t>(v)], "face");
        }
        solid.faces.push_back(face);
    }

    const json& edges = j["edges"];
    if (!edges.is_array()) throw SchemaError("'edges' must be an array");
    for (size_t ei = 0; ei < edges.size(); ++ei) {
        const json& je = edges[ei];
        if (!je.is_object() || !je.contains("polyline") || !je.contains("face_a") ||
            !je.contains("face_b"))
            throw SchemaError("edge " + std::to_string(ei) +
                              ": expected {polyline, face_a, face_b}");
        const json& poly = je["polyline"];
        if (!poly.is_array() || poly.size() != kEdgeSamples)
            throw SchemaError("edge " + std::to_string(ei) + ": polyline must have " +
                              std::to_string(kEdgeSamples) + " points");
        EdgeGeom edge;
        for (int i = 0; i < kEdgeSamples; ++i)
            edge.polyline[static_cast<size_t>(i)] = parse_point(poly[static_cast<size_t>(i)], "edge");
        if (!je["face_a"].is_number_integer() || !je["face_b"].is_number_integer())
            throw SchemaError("edge " + std::to_string(ei) + ": face refs must be integers");
        edge.face_a = je["face_a"].get<int>();
        edge.face_b = je["face_b"].get<int>();
        solid.edges.push_back(edge);
    }

    if (j.contains("class_label") && !j["class_label"].is_null()) {
        if (!j["class_label"].is_number_integer())
            throw SchemaError("'class_label' must be an integer or null");
        solid.class_label = j["class_label"].get<int>();
    }

    const SolidCheck check = validate_solid(solid, n_max);
    if (!check.ok()) throw InvariantError(check.errors.front());
    return solid;
}

std::string save_solid(const SolidModel& solid) {
    json j;
    j["faces"] = json::array();
    for (const FaceGeom& face : solid.faces) {
        json rows = json::array();
        for (int u = 0; u < kGridN; ++u) {
            json row = json::array();
            for (int v = 0; v < kGridN; ++v) row.push_back(dump_point(face.at(u, v)));
            rows.push_back(std::move(row));
        }
        j["faces"].push_back(std::move(rows));
    }
    j["edges"] = json::array();
    for (const EdgeGeom& edge : solid.edges) {
        json je;
        je["polyline"] = json::array();
        for (const Point3& p : edge.polyline) je["polyline"].push_back(dump_point(p));
        je["face_a"] = edge.face_a;
        je["face_b"] = edge.face_b;
        j["edges"].push_back(std::move(je));
    }
    j["class_label"] = solid.class_label ? json(*solid.class_label) : json(nullptr);
    return j.dump();
}

SolidModel load_solid_file(const std::string& path, int n_max) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_solid(ss.str(), n_max);
}

void save_solid_file(const SolidModel& solid, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path);
    out << save_solid(solid);
}

std::string save_manifest(const DatasetManifest& manifest) {
    json j;
    j["seed"] = manifest.seed;
    j["config_hash"] = manifest.config_hash;
    j["version"] = manifest.tool_version.empty() ? kVersion : manifest.tool_version;
    j["entries"] = json::array();
    for (const ManifestEntry& e : manifest.entries) {
        json je;
        je["path"] = e.path;
        je["class_label"] = e.class_label ? json(*e.class_label) : json(nullptr);
        je["face_count"] = e.face_count;
        je["edge_count"] = e.edge_count;
        j["entries"].push_back(std::move(je));
    }
    return j.dump(2);
}

DatasetManifest load_manifest(const std::string& bytes, int n_max) {
    json j;
    try {
        j = json::parse(bytes);
    } catch (const json::exception& e) {
        throw ParseError(e.what());
    }
    if (!j.is_object() || !j.contains("entries") || !j.contains("seed"))
        throw SchemaError("manifest must carry 'entries' and 'seed'");
    DatasetManifest m;
    m.seed = j["seed"].get<uint64_t>();
    m.config_hash = j.value("config_hash", uint64_t{0});
    m.tool_version = j.value("version", std::string{});
    std::set<std::string> seen;
    for (const json& je : j["entries"]) {
        ManifestEntry e;
        e.path = je.at("path").get<std::string>();
        if (!seen.insert(e.path).second)
            throw InvariantError("duplicate manifest path " + e.path);
        if (je.contains("class_label") && !je["class_label"].is_null())
            e.class_label = je["class_label"].get<int>();
        e.face_count = je.at("face_count").get<int>();
        e.edge_count = je.at("edge_count").get<int>();
        if (e.face_count > n_max)
            throw InvariantError("manifest entry " + e.path + " exceeds n_max");
        m.entries.push_back(std::move(e));
    }
    return m;
}

}  // namespace breptok
