#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "breptok/model.hpp"

namespace breptok {

// JSON interchange for solids:
//   { "faces":  [ [[x,y,z] x32] x32, ... ],
//     "edges":  [ {"polyline": [[x,y,z] x32], "face_a": i, "face_b": j}, ... ],
//     "class_label": int|null }
SolidModel load_solid(const std::string& bytes, int n_max = 50);
std::string save_solid(const SolidModel& solid);

SolidModel load_solid_file(const std::string& path, int n_max = 50);
void save_solid_file(const SolidModel& solid, const std::string& path);

struct ManifestEntry {
    std::string path;
    std::optional<int> class_label;
    int face_count = 0;
    int edge_count = 0;
};

struct DatasetManifest {
    std::vector<ManifestEntry> entries;
    uint64_t seed = 0;
    uint64_t config_hash = 0;
    std::string tool_version;
};

std::string save_manifest(const DatasetManifest& manifest);
DatasetManifest load_manifest(const std::string& bytes, int n_max = 50);

}  // namespace breptok
