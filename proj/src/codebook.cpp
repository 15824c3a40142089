#include "breptok/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <set>

#include "json.hpp"

#include "breptok/errors.hpp"
#include "breptok/rng.hpp"

namespace breptok {

namespace {

std::string patch_key(std::span<const double> patch) {
    return std::string(reinterpret_cast<const char*>(patch.data()), patch.size() * sizeof(double));
}

void check_finite(const PatchLatent& latent) {
    for (const auto& patch : latent.patches)
        for (double v : patch)
            if (!std::isfinite(v)) throw NonFiniteGeometry("patch latent contains NaN/inf");
}

}  // namespace

PatchLatent encode_grid(const FaceGeom& grid) {
    PatchLatent latent;
    for (int bu = 0; bu < kPatchSplit; ++bu) {
        for (int bv = 0; bv < kPatchSplit; ++bv) {
            auto& patch = latent.patches[static_cast<size_t>(bu * kPatchSplit + bv)];
            size_t w = 0;
            for (int du = 0; du < kPatchN; ++du) {
                for (int dv = 0; dv < kPatchN; ++dv) {
                    const Point3& p = grid.at(bu * kPatchN + du, bv * kPatchN + dv);
                    patch[w++] = p.x;
                    patch[w++] = p.y;
                    patch[w++] = p.z;
                }
            }
        }
    }
    check_finite(latent);
    return latent;
}

PatchLatent encode_face(const FaceGeom& face) { return encode_grid(face); }

FaceGeom broadcast_edge(const EdgeGeom& edge) {
    FaceGeom grid;
    for (int u = 0; u < kGridN; ++u)
        for (int v = 0; v < kGridN; ++v) grid.at(u, v) = edge.polyline[static_cast<size_t>(u)];
    return grid;
}

PatchLatent encode_edge(const EdgeGeom& edge) { return encode_grid(broadcast_edge(edge)); }

EdgePolyline collapse_edge(const FaceGeom& grid) {
    EdgePolyline poly{};
    for (int u = 0; u < kGridN; ++u) {
        Point3 acc;
        for (int v = 0; v < kGridN; ++v) acc = acc + grid.at(u, v);
        poly[static_cast<size_t>(u)] = acc * (1.0 / kGridN);
    }
    return poly;
}

Codebook::Codebook(int n_geo, std::vector<double> codewords)
    : n_geo_(n_geo), words_(std::move(codewords)) {
    if (n_geo_ < 0 || words_.size() != static_cast<size_t>(n_geo_) * kPatchDim)
        throw InvariantError("codeword buffer does not match n_geo * patch_dim");
    usage_.assign(static_cast<size_t>(n_geo_), 0);
}

std::span<const double> Codebook::codeword(uint32_t index) const {
    if (index >= static_cast<uint32_t>(n_geo_)) throw IndexOutOfRange("codeword index");
    return {words_.data() + static_cast<size_t>(index) * kPatchDim, kPatchDim};
}

uint32_t Codebook::nearest(std::span<const double> patch) const {
    if (empty()) throw EmptyCodebook("codebook has no codewords");
    if (!exact_.empty()) {
        const auto hit = exact_.find(patch_key(patch));
        if (hit != exact_.end()) return hit->second;
    }
    uint32_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    const double* w = words_.data();
    for (int c = 0; c < n_geo_; ++c, w += kPatchDim) {
        double d = 0.0;
        for (int i = 0; i < kPatchDim; ++i) {
            const double diff = patch[static_cast<size_t>(i)] - w[i];
            d += diff * diff;
        }
        if (d < best_d) {
            best_d = d;
            best = static_cast<uint32_t>(c);
        }
    }
    return best;
}

void Codebook::record_usage(const GeomTokens& tokens) {
    for (uint32_t t : tokens) {
        if (t >= static_cast<uint32_t>(n_geo_)) throw IndexOutOfRange("geometry token");
        ++usage_[t];
    }
}

void Codebook::reset_usage() { std::fill(usage_.begin(), usage_.end(), 0); }

void Codebook::rebuild_exact_index() {
    exact_.clear();
    for (int c = n_geo_ - 1; c >= 0; --c)
        exact_[patch_key(codeword(static_cast<uint32_t>(c)))] = static_cast<uint32_t>(c);
}

GeomTokens quantize(const PatchLatent& latent, const Codebook& cb) {
    if (cb.empty()) throw EmptyCodebook("codebook has no codewords");
    GeomTokens tokens{};
    for (int p = 0; p < kGeomTokens; ++p)
        tokens[static_cast<size_t>(p)] = cb.nearest(latent.patches[static_cast<size_t>(p)]);
    return tokens;
}

namespace {

FaceGeom assemble_grid(const GeomTokens& tokens, const Codebook& cb) {
    FaceGeom grid;
    for (int bu = 0; bu < kPatchSplit; ++bu) {
        for (int bv = 0; bv < kPatchSplit; ++bv) {
            const auto patch = cb.codeword(tokens[static_cast<size_t>(bu * kPatchSplit + bv)]);
            size_t r = 0;
            for (int du = 0; du < kPatchN; ++du) {
                for (int dv = 0; dv < kPatchN; ++dv) {
                    Point3& p = grid.at(bu * kPatchN + du, bv * kPatchN + dv);
                    p.x = patch[r++];
                    p.y = patch[r++];
                    p.z = patch[r++];
                }
            }
        }
    }
    return grid;
}

}  // namespace

FaceGeom decode_face(const GeomTokens& tokens, const Codebook& cb) {
    return assemble_grid(tokens, cb);
}

EdgePolyline decode_edge(const GeomTokens& tokens, const Codebook& cb) {
    return collapse_edge(assemble_grid(tokens, cb));
}

namespace {

// flat view of all patches in a latent dataset
struct PatchView {
    const std::vector<PatchLatent>* data;
    size_t count() const { return data->size() * kGeomTokens; }
    const std::array<double, kPatchDim>& at(size_t i) const {
        return (*data)[i / kGeomTokens].patches[i % kGeomTokens];
    }
};

double patch_dist2(const double* a, const double* b) {
    double d = 0.0;
    for (int i = 0; i < kPatchDim; ++i) {
        const double diff = a[i] - b[i];
        d += diff * diff;
    }
    return d;
}

uint32_t assign_nearest(const double* patch, const std::vector<double>& words, int n_geo) {
    uint32_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    const double* w = words.data();
    for (int c = 0; c < n_geo; ++c, w += kPatchDim) {
        const double d = patch_dist2(patch, w);
        if (d < best_d) {
            best_d = d;
            best = static_cast<uint32_t>(c);
        }
    }
    return best;
}

double mse_over(const PatchView& view, const std::vector<size_t>& indices,
                const std::vector<double>& words, int n_geo) {
    if (indices.empty()) return 0.0;
    double total = 0.0;
    std::vector<double> partial(indices.size(), 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(indices.size()); ++i) {
        const double* patch = view.at(indices[static_cast<size_t>(i)]).data();
        const uint32_t c = assign_nearest(patch, words, n_geo);
        partial[static_cast<size_t>(i)] =
            patch_dist2(patch, words.data() + static_cast<size_t>(c) * kPatchDim);
    }
    for (double p : partial) total += p;
    return total / (static_cast<double>(indices.size()) * kPatchDim);
}

}  // namespace

Codebook train_codebook(const std::vector<PatchLatent>& dataset, int n_geo,
                        const CodebookTrainConfig& cfg, CodebookTrainStats* stats) {
    if (dataset.empty()) throw EmptyDataset("codebook training needs at least one latent");
    if (n_geo < 4) throw ParamError("n_geo must be at least 4");

    const PatchView view{&dataset};
    const size_t n_patches = view.count();
    Rng rng(cfg.seed);

    // fixed validation split: every 10th patch (all patches when tiny)
    std::vector<size_t> train_idx, val_idx;
    for (size_t i = 0; i < n_patches; ++i) {
        if (n_patches >= 20 && i % 10 == 9)
            val_idx.push_back(i);
        else
            train_idx.push_back(i);
    }
    if (val_idx.empty()) val_idx = train_idx;

    // initialize codewords from the first distinct patches, then random fills
    std::vector<double> words(static_cast<size_t>(n_geo) * kPatchDim, 0.0);
    std::set<std::string> seen;
    int filled = 0;
    for (size_t i = 0; i < train_idx.size() && filled < n_geo; ++i) {
        const auto& patch = view.at(train_idx[i]);
        if (seen.insert(patch_key({patch.data(), patch.size()})).second) {
            std::copy(patch.begin(), patch.end(),
                      words.begin() + static_cast<size_t>(filled) * kPatchDim);
            ++filled;
        }
    }
    for (; filled < n_geo; ++filled) {
        const auto& patch = view.at(train_idx[rng.bounded(train_idx.size())]);
        std::copy(patch.begin(), patch.end(),
                  words.begin() + static_cast<size_t>(filled) * kPatchDim);
    }

    CodebookTrainStats local;
    CodebookTrainStats& st = stats ? *stats : local;
    st.initial_val_mse = mse_over(view, val_idx, words, n_geo);

    std::vector<uint64_t> center_count(static_cast<size_t>(n_geo), 0);
    std::vector<uint64_t> total_usage(static_cast<size_t>(n_geo), 0);
    std::vector<size_t> pool;  // reservoir of recent feature indices
    size_t pool_stream = 0;
    const size_t pool_cap = static_cast<size_t>(std::max(cfg.restart.pool_size, 1));

    std::vector<size_t> order = train_idx;
    std::vector<uint32_t> batch_assign;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        shuffle(order, rng);
        std::vector<uint64_t> epoch_usage(static_cast<size_t>(n_geo), 0);

        for (size_t start = 0; start < order.size(); start += static_cast<size_t>(cfg.batch_size)) {
            const size_t stop = std::min(order.size(), start + static_cast<size_t>(cfg.batch_size));
            batch_assign.assign(stop - start, 0);
#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(stop - start); ++i) {
                batch_assign[static_cast<size_t>(i)] =
                    assign_nearest(view.at(order[start + static_cast<size_t>(i)]).data(), words, n_geo);
            }
            // sequential center updates keep the run reproducible
            for (size_t i = start; i < stop; ++i) {
                const uint32_t c = batch_assign[i - start];
                const auto& patch = view.at(order[i]);
                double* w = words.data() + static_cast<size_t>(c) * kPatchDim;
                const double inv = 1.0 / static_cast<double>(++center_count[c]);
                for (int d = 0; d < kPatchDim; ++d) w[d] += (patch[static_cast<size_t>(d)] - w[d]) * inv;
                ++epoch_usage[c];
                ++total_usage[c];

                // reservoir of recent features for dead-codeword restarts
                ++pool_stream;
                if (pool.size() < pool_cap)
                    pool.push_back(order[i]);
                else if (rng.bounded(pool_stream) < pool_cap)
                    pool[rng.bounded(pool_cap)] = order[i];
            }
        }

        if (cfg.restart.enabled && !pool.empty()) {
            for (int c = 0; c < n_geo; ++c) {
                if (epoch_usage[static_cast<size_t>(c)] >= cfg.restart.min_usage) continue;
                const auto& patch = view.at(pool[rng.bounded(pool.size())]);
                std::copy(patch.begin(), patch.end(),
                          words.begin() + static_cast<size_t>(c) * kPatchDim);
                center_count[static_cast<size_t>(c)] = 1;
                ++st.restarts;
            }
        }
        st.epoch_val_mse.push_back(mse_over(view, val_idx, words, n_geo));
    }

    st.final_val_mse = st.epoch_val_mse.empty() ? st.initial_val_mse : st.epoch_val_mse.back();

    Codebook cb(n_geo, std::move(words));
    cb.mutable_usage() = total_usage;
    cb.rebuild_exact_index();
    return cb;
}

namespace {

template <typename T>
void write_pod(std::ofstream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw FormatError("truncated codebook file");
    return v;
}

constexpr uint32_t kCodebookVersion = 1;
constexpr char kCodebookMagic[4] = {'B', 'T', 'C', 'B'};

}  // namespace

void save_codebook(const Codebook& cb, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path);
    out.write(kCodebookMagic, 4);
    write_pod(out, kCodebookVersion);
    write_pod(out, static_cast<uint32_t>(cb.size()));
    write_pod(out, static_cast<uint32_t>(cb.patch_dim()));
    write_pod(out, cb.layout_hash());
    for (double v : cb.codewords()) write_pod(out, static_cast<float>(v));
    for (uint64_t u : cb.usage_counts()) write_pod(out, u);
}

Codebook load_codebook(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kCodebookMagic, 4) != 0)
        throw FormatError("not a codebook file: " + path);
    const uint32_t version = read_pod<uint32_t>(in);
    if (version != kCodebookVersion) throw FormatError("unsupported codebook version");
    const uint32_t n_geo = read_pod<uint32_t>(in);
    const uint32_t dim = read_pod<uint32_t>(in);
    if (dim != kPatchDim) throw FormatError("codebook patch_dim mismatch");
    const uint64_t layout_hash = read_pod<uint64_t>(in);
    std::vector<double> words(static_cast<size_t>(n_geo) * kPatchDim);
    for (double& v : words) v = static_cast<double>(read_pod<float>(in));
    Codebook cb(static_cast<int>(n_geo), std::move(words));
    for (uint64_t& u : cb.mutable_usage()) u = read_pod<uint64_t>(in);
    cb.set_layout_hash(layout_hash);
    cb.rebuild_exact_index();
    return cb;
}

std::string codebook_to_json(const Codebook& cb) {
    nlohmann::json j;
    j["n_geo"] = cb.size();
    j["patch_dim"] = cb.patch_dim();
    j["layout_hash"] = cb.layout_hash();
    j["usage_counts"] = cb.usage_counts();
    j["codewords"] = nlohmann::json::array();
    for (int c = 0; c < cb.size(); ++c) {
        const auto w = cb.codeword(static_cast<uint32_t>(c));
        j["codewords"].push_back(std::vector<double>(w.begin(), w.end()));
    }
    return j.dump();
}

double quantization_mse(const std::vector<PatchLatent>& dataset, const Codebook& cb) {
    if (dataset.empty()) throw EmptyDataset("empty dataset");
    double total = 0.0;
    for (const PatchLatent& latent : dataset) {
        for (const auto& patch : latent.patches) {
            const uint32_t c = cb.nearest({patch.data(), patch.size()});
            const auto w = cb.codeword(c);
            for (int i = 0; i < kPatchDim; ++i) {
                const double diff = patch[static_cast<size_t>(i)] - w[static_cast<size_t>(i)];
                total += diff * diff;
            }
        }
    }
    return total / (static_cast<double>(dataset.size()) * kGeomTokens * kPatchDim);
}

double utilization(const std::vector<PatchLatent>& dataset, const Codebook& cb) {
    if (cb.empty()) throw EmptyCodebook("codebook has no codewords");
    std::vector<char> used(static_cast<size_t>(cb.size()), 0);
    for (const PatchLatent& latent : dataset)
        for (const auto& patch : latent.patches) used[cb.nearest({patch.data(), patch.size()})] = 1;
    size_t n = 0;
    for (char u : used) n += static_cast<size_t>(u);
    return static_cast<double>(n) / static_cast<double>(cb.size());
}

}  // namespace breptok
