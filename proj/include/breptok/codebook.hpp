#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "breptok/model.hpp"

namespace breptok {

// A 32x32x3 grid is split into a 2x2 arrangement of 16x16 patches, each
// flattened row-major to 768 reals. One codebook index per patch gives the
// four geometry tokens of a face or edge.
constexpr int kPatchSplit = 2;
constexpr int kPatchN = kGridN / kPatchSplit;              // 16
constexpr int kPatchDim = kPatchN * kPatchN * 3;           // 768
constexpr int kGeomTokens = kPatchSplit * kPatchSplit;     // 4

struct PatchLatent {
    // patch p = bu * 2 + bv, where bu/bv select the 16-row/16-column block
    std::array<std::array<double, kPatchDim>, kGeomTokens> patches{};
};

using GeomTokens = std::array<uint32_t, kGeomTokens>;
using EdgePolyline = std::array<Point3, kEdgeSamples>;

PatchLatent encode_face(const FaceGeom& face);
PatchLatent encode_grid(const FaceGeom& grid);  // alias used for edges after broadcast

// The 32-point curve repeated along the V axis: grid[u][v] = polyline[u].
FaceGeom broadcast_edge(const EdgeGeom& edge);
PatchLatent encode_edge(const EdgeGeom& edge);

// Exact inverse of broadcast for broadcast-constant grids; averages across V
// otherwise.
EdgePolyline collapse_edge(const FaceGeom& grid);

class Codebook {
public:
    Codebook() = default;
    Codebook(int n_geo, std::vector<double> codewords);

    int size() const { return n_geo_; }
    int patch_dim() const { return kPatchDim; }
    bool empty() const { return n_geo_ == 0; }

    std::span<const double> codeword(uint32_t index) const;
    const std::vector<double>& codewords() const { return words_; }
    const std::vector<uint64_t>& usage_counts() const { return usage_; }

    // Nearest codeword by squared Euclidean distance, ties to the lowest index.
    uint32_t nearest(std::span<const double> patch) const;

    void record_usage(const GeomTokens& tokens);
    void reset_usage();

    // Exact-match lookup table; rebuilt after training/loading, used as a
    // shortcut inside nearest().
    void rebuild_exact_index();

    std::vector<double>& mutable_codewords() { return words_; }
    std::vector<uint64_t>& mutable_usage() { return usage_; }
    void set_layout_hash(uint64_t h) { layout_hash_ = h; }
    uint64_t layout_hash() const { return layout_hash_; }

private:
    int n_geo_ = 0;
    std::vector<double> words_;    // n_geo * kPatchDim, row-major
    std::vector<uint64_t> usage_;  // per codeword
    uint64_t layout_hash_ = 0;
    std::unordered_map<std::string, uint32_t> exact_;
};

// Pure token mapping; usage accounting is explicit via record_usage.
GeomTokens quantize(const PatchLatent& latent, const Codebook& cb);

FaceGeom decode_face(const GeomTokens& tokens, const Codebook& cb);
EdgePolyline decode_edge(const GeomTokens& tokens, const Codebook& cb);

struct RestartConfig {
    bool enabled = true;
    uint64_t min_usage = 1;  // codewords used fewer times per epoch restart
    int pool_size = 8192;
};

struct CodebookTrainConfig {
    int epochs = 8;
    int batch_size = 256;
    RestartConfig restart;
    uint64_t seed = 0;
};

struct CodebookTrainStats {
    double initial_val_mse = 0.0;
    double final_val_mse = 0.0;
    std::vector<double> epoch_val_mse;
    int restarts = 0;
};

// Mini-batch k-means over patch vectors with dead-codeword reinitialization
// from a reservoir pool of recent features.
Codebook train_codebook(const std::vector<PatchLatent>& dataset, int n_geo,
                        const CodebookTrainConfig& cfg, CodebookTrainStats* stats = nullptr);

// file format: magic "BTCB", u32 version, u32 n_geo, u32 patch_dim,
// u64 layout hash, then f32 codewords and u64 usage counts (little endian)
void save_codebook(const Codebook& cb, const std::string& path);
Codebook load_codebook(const std::string& path);
std::string codebook_to_json(const Codebook& cb);

double quantization_mse(const std::vector<PatchLatent>& dataset, const Codebook& cb);
double utilization(const std::vector<PatchLatent>& dataset, const Codebook& cb);

}  // namespace breptok
