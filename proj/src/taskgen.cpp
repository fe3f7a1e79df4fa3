#include "mtad/taskgen.hpp"

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "mtad/rng.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace mtad {

const char* task_name(TaskId t) {
    switch (t) {
        case TaskId::VTrans: return "v";
        case TaskId::HTrans: return "h";
        case TaskId::Rot: return "rot";
        case TaskId::Puzz: return "puzz";
    }
    return "?";
}

TaskId task_from_name(const std::string& name) {
    for (TaskId t : kAllTasks)
        if (name == task_name(t)) return t;
    throw std::invalid_argument("unknown task name: " + name);
}

int task_class_count(TaskId t, int k) {
    switch (t) {
        case TaskId::VTrans: return 3;
        case TaskId::HTrans: return 3;
        case TaskId::Rot: return 4;
        case TaskId::Puzz: return k;
    }
    return 0;
}

GeoTaskSpec default_geo_spec(int h, int w) {
    GeoTaskSpec spec;
    spec.t_x = std::max(1, w / 8);
    spec.t_y = std::max(1, h / 8);
    return spec;
}

void LabeledTaskBatch::push(ImageTensor img, TaskId t, int label) {
    images.push_back(std::move(img));
    task_ids.push_back(t);
    class_labels.push_back(label);
}

ImageTensor apply_translation(const ImageTensor& img, int dx, int dy) {
    if (std::abs(dx) >= img.w || std::abs(dy) >= img.h)
        throw std::invalid_argument("translation magnitude must be smaller than the image side");
    if (dx == 0 && dy == 0) return img;
    ImageTensor out(img.h, img.w, img.c);
    for (int y = 0; y < img.h; ++y) {
        const int sy = std::clamp(y - dy, 0, img.h - 1);
        for (int x = 0; x < img.w; ++x) {
            const int sx = std::clamp(x - dx, 0, img.w - 1);
            for (int ch = 0; ch < img.c; ++ch) out.at(y, x, ch) = img.at(sy, sx, ch);
        }
    }
    return out;
}

ImageTensor apply_rotation(const ImageTensor& img, int quarter_turns) {
    if (quarter_turns < 0 || quarter_turns > 3)
        throw std::invalid_argument("quarter_turns must be in {0,1,2,3}");
    if (quarter_turns == 0) return img;
    const bool swap = (quarter_turns % 2) == 1;
    ImageTensor out(swap ? img.w : img.h, swap ? img.h : img.w, img.c);
    for (int y = 0; y < img.h; ++y) {
        for (int x = 0; x < img.w; ++x) {
            int oy = 0, ox = 0;
            switch (quarter_turns) {
                case 1: oy = img.w - 1 - x; ox = y; break;          // 90 deg CCW
                case 2: oy = img.h - 1 - y; ox = img.w - 1 - x; break;
                case 3: oy = x; ox = img.h - 1 - y; break;
            }
            for (int ch = 0; ch < img.c; ++ch) out.at(oy, ox, ch) = img.at(y, x, ch);
        }
    }
    return out;
}

namespace {

uint64_t factorial_capped(int n, uint64_t cap) {
    uint64_t f = 1;
    for (int i = 2; i <= n; ++i) {
        if (f > cap / i) return cap + 1;  // saturate
        f *= i;
    }
    return f;
}

}  // namespace

std::vector<Permutation> sample_permutations(int n_cells, int k, uint64_t seed) {
    if (n_cells < 1) throw std::invalid_argument("n_cells must be >= 1");
    if (k < 2) throw std::invalid_argument("permutation count k must be >= 2");
    const uint64_t space = factorial_capped(n_cells, 1ULL << 62);
    if (static_cast<uint64_t>(k) > space)
        throw std::invalid_argument("k exceeds n_cells! = " + std::to_string(space));

    Permutation identity(n_cells);
    std::iota(identity.begin(), identity.end(), 0);

    Rng rng(mix_seed(seed, 0x7065726dULL));  // "perm"
    std::set<Permutation> seen;
    seen.insert(identity);
    std::vector<Permutation> out;
    out.push_back(identity);
    Permutation cand = identity;
    while (out.size() < static_cast<size_t>(k)) {
        rng.shuffle(cand);
        if (seen.insert(cand).second) out.push_back(cand);
    }
    return out;
}

void validate_jigsaw_spec(const JigsawSpec& spec) {
    if (spec.n_h < 1 || spec.n_w < 1) throw std::invalid_argument("jigsaw grid must be >= 1x1");
    const int n_cells = spec.n_h * spec.n_w;
    const uint64_t space = factorial_capped(n_cells, 1ULL << 62);
    if (spec.k < 2 || static_cast<uint64_t>(spec.k) > space)
        throw std::invalid_argument("jigsaw k must satisfy 2 <= k <= (n_h*n_w)!");
    if (spec.permutations.size() != static_cast<size_t>(spec.k))
        throw std::invalid_argument("jigsaw spec must carry exactly k permutations");
    if (spec.margin_frac < 0.0 || spec.margin_frac >= 0.5)
        throw std::invalid_argument("margin_frac must lie in [0, 0.5)");
    std::set<Permutation> seen;
    for (size_t i = 0; i < spec.permutations.size(); ++i) {
        const Permutation& p = spec.permutations[i];
        if (p.size() != static_cast<size_t>(n_cells))
            throw std::invalid_argument("permutation length must equal n_h*n_w");
        std::vector<bool> hit(n_cells, false);
        for (int v : p) {
            if (v < 0 || v >= n_cells || hit[v])
                throw std::invalid_argument("permutation is not a bijection on cells");
            hit[v] = true;
        }
        if (!seen.insert(p).second) throw std::invalid_argument("duplicate permutation");
    }
    Permutation identity(n_cells);
    std::iota(identity.begin(), identity.end(), 0);
    if (spec.permutations[0] != identity)
        throw std::invalid_argument("permutations[0] must be the identity");
}

JigsawSpec default_jigsaw_spec(int n_h, int n_w, int k, uint64_t seed) {
    JigsawSpec spec;
    spec.n_h = n_h;
    spec.n_w = n_w;
    spec.k = k;
    spec.permutations = sample_permutations(n_h * n_w, k, seed);
    validate_jigsaw_spec(spec);
    return spec;
}

JigsawGeometry jigsaw_geometry(int h, int w, const JigsawSpec& spec) {
    JigsawGeometry g{};
    g.cell_h = h / spec.n_h;
    g.cell_w = w / spec.n_w;
    if (g.cell_h < 1 || g.cell_w < 1)
        throw std::invalid_argument("image too small for the jigsaw grid");
    g.margin_h = static_cast<int>(std::lround(spec.margin_frac * g.cell_h));
    g.margin_w = static_cast<int>(std::lround(spec.margin_frac * g.cell_w));
    g.patch_h = g.cell_h - 2 * g.margin_h;
    g.patch_w = g.cell_w - 2 * g.margin_w;
    if (g.patch_h < 1 || g.patch_w < 1)
        throw std::invalid_argument("margin leaves no patch pixels");
    g.jitter_h = spec.jitter_px < 0 ? g.margin_h : spec.jitter_px;
    g.jitter_w = spec.jitter_px < 0 ? g.margin_w : spec.jitter_px;
    // a patch inset by the margin and shifted by at most the jitter must stay
    // inside its cell
    if (g.jitter_h > g.margin_h || g.jitter_w > g.margin_w)
        throw std::invalid_argument("jitter would push patches outside their cell");
    return g;
}

ImageTensor apply_jigsaw(const ImageTensor& img, const JigsawSpec& spec, int perm_index,
                         uint64_t rng_seed) {
    if (perm_index < 0 || perm_index >= spec.k)
        throw std::invalid_argument("perm_index out of range");
    const JigsawGeometry g = jigsaw_geometry(img.h, img.w, spec);
    const Permutation& perm = spec.permutations[perm_index];

    const std::vector<float> mean = channel_means(img);
    ImageTensor out(img.h, img.w, img.c);
    for (int y = 0; y < img.h; ++y)
        for (int x = 0; x < img.w; ++x)
            for (int ch = 0; ch < img.c; ++ch) out.at(y, x, ch) = mean[ch];

    Rng rng(mix_seed(rng_seed, 0x6a696773ULL));  // "jigs"
    const int n_cells = spec.n_h * spec.n_w;
    for (int dest = 0; dest < n_cells; ++dest) {
        const int src = perm[dest];
        const int sr = src / spec.n_w, sc = src % spec.n_w;
        const int dr = dest / spec.n_w, dc = dest % spec.n_w;
        // per-patch offset, drawn in a fixed dest order
        const int jy = g.jitter_h > 0 ? static_cast<int>(rng.uniform_int(-g.jitter_h, g.jitter_h)) : 0;
        const int jx = g.jitter_w > 0 ? static_cast<int>(rng.uniform_int(-g.jitter_w, g.jitter_w)) : 0;
        const int sy0 = sr * g.cell_h + g.margin_h + jy;
        const int sx0 = sc * g.cell_w + g.margin_w + jx;
        const int dy0 = dr * g.cell_h + g.margin_h;
        const int dx0 = dc * g.cell_w + g.margin_w;
        for (int py = 0; py < g.patch_h; ++py)
            for (int px = 0; px < g.patch_w; ++px)
                for (int ch = 0; ch < img.c; ++ch)
                    out.at(dy0 + py, dx0 + px, ch) = img.at(sy0 + py, sx0 + px, ch);
    }
    return out;
}

ImageTensor apply_task_variant(const ImageTensor& img, TaskId task, int label,
                               const GeoTaskSpec& geo, const JigsawSpec& jig,
                               uint64_t jitter_seed) {
    switch (task) {
        case TaskId::VTrans: {
            const int dy = label == 0 ? 0 : (label == 1 ? -geo.t_y : geo.t_y);
            return apply_translation(img, 0, dy);
        }
        case TaskId::HTrans: {
            const int dx = label == 0 ? 0 : (label == 1 ? -geo.t_x : geo.t_x);
            return apply_translation(img, dx, 0);
        }
        case TaskId::Rot:
            return apply_rotation(img, geo.rotation_set.at(label));
        case TaskId::Puzz:
            return apply_jigsaw(img, jig, label, jitter_seed);
    }
    throw std::invalid_argument("unknown task");
}

LabeledTaskBatch generate_task_dataset(const std::vector<ImageTensor>& images,
                                       const GeoTaskSpec& geo, const JigsawSpec& jig,
                                       uint64_t seed) {
    validate_jigsaw_spec(jig);
    LabeledTaskBatch batch;
    const size_t variants = static_cast<size_t>(3 + 3 + 4 + jig.k);
    batch.images.reserve(images.size() * variants);
    batch.task_ids.reserve(images.size() * variants);
    batch.class_labels.reserve(images.size() * variants);

    for (size_t i = 0; i < images.size(); ++i) {
        const ImageTensor& img = images[i];
        int variant = 0;
        for (TaskId t : kAllTasks) {
            const int classes = task_class_count(t, jig.k);
            for (int label = 0; label < classes; ++label, ++variant) {
                batch.push(apply_task_variant(img, t, label, geo, jig, mix_seed(seed, i, variant)),
                           t, label);
            }
        }
    }
    return batch;
}

// --- batch cache -------------------------------------------------------------

namespace {

template <class T>
void write_le(std::ostream& os, T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    // the build targets are little-endian; keep the byte order explicit anyway
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    os.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <class T>
T read_le(std::istream& is) {
    unsigned char buf[sizeof(T)];
    is.read(reinterpret_cast<char*>(buf), sizeof(T));
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return v;
}

std::string shard_name(size_t idx) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "records_%05zu.bin", idx);
    return buf;
}

}  // namespace

void write_batch_cache(const std::string& dir, const LabeledTaskBatch& batch,
                       const GeoTaskSpec& geo, const JigsawSpec& jig, uint64_t seed,
                       size_t records_per_shard) {
    fs::create_directories(dir);
    std::vector<std::string> shards;
    size_t idx = 0;
    while (idx < batch.size() || (batch.size() == 0 && shards.empty())) {
        const std::string name = shard_name(shards.size());
        std::ofstream os(fs::path(dir) / name, std::ios::binary);
        if (!os) throw std::runtime_error("cannot write cache shard " + name);
        const size_t end = std::min(batch.size(), idx + records_per_shard);
        for (; idx < end; ++idx) {
            const ImageTensor& img = batch.images[idx];
            write_le<uint32_t>(os, static_cast<uint32_t>(img.h));
            write_le<uint32_t>(os, static_cast<uint32_t>(img.w));
            write_le<uint32_t>(os, static_cast<uint32_t>(img.c));
            write_le<uint8_t>(os, static_cast<uint8_t>(batch.task_ids[idx]));
            write_le<uint8_t>(os, static_cast<uint8_t>(batch.class_labels[idx]));
            os.write(reinterpret_cast<const char*>(img.data.data()),
                     static_cast<std::streamsize>(img.data.size() * sizeof(float)));
        }
        shards.push_back(name);
        if (batch.size() == 0) break;
    }

    json manifest;
    manifest["record_count"] = batch.size();
    manifest["shards"] = shards;
    manifest["seed"] = seed;
    manifest["geo"] = {{"t_x", geo.t_x}, {"t_y", geo.t_y}, {"rotation_set", geo.rotation_set}};
    manifest["jigsaw"] = {{"n_h", jig.n_h},
                          {"n_w", jig.n_w},
                          {"k", jig.k},
                          {"margin_frac", jig.margin_frac},
                          {"jitter_px", jig.jitter_px},
                          {"permutations", jig.permutations}};
    manifest["task_id_values"] = {{"v", 0}, {"h", 1}, {"rot", 2}, {"puzz", 3}};
    std::ofstream ms(fs::path(dir) / "manifest.json");
    ms << manifest.dump(2) << "\n";
}

LabeledTaskBatch read_batch_cache(const std::string& dir) {
    std::ifstream ms(fs::path(dir) / "manifest.json");
    if (!ms) throw std::runtime_error("cache manifest not found in " + dir);
    json manifest = json::parse(ms);
    LabeledTaskBatch batch;
    const size_t expect = manifest.at("record_count").get<size_t>();
    for (const auto& shard : manifest.at("shards")) {
        std::ifstream is(fs::path(dir) / shard.get<std::string>(), std::ios::binary);
        if (!is) throw std::runtime_error("missing cache shard");
        for (;;) {
            const uint32_t h = read_le<uint32_t>(is);
            if (!is) break;  // clean EOF
            const uint32_t w = read_le<uint32_t>(is);
            const uint32_t c = read_le<uint32_t>(is);
            const uint8_t task = read_le<uint8_t>(is);
            const uint8_t label = read_le<uint8_t>(is);
            if (!is || c == 0 || c > 4 || h == 0 || w == 0 || task > 3)
                throw std::runtime_error("corrupt cache record header");
            ImageTensor img(static_cast<int>(h), static_cast<int>(w), static_cast<int>(c));
            is.read(reinterpret_cast<char*>(img.data.data()),
                    static_cast<std::streamsize>(img.data.size() * sizeof(float)));
            if (!is) throw std::runtime_error("truncated cache record");
            batch.push(std::move(img), static_cast<TaskId>(task), label);
        }
    }
    if (batch.size() != expect)
        throw std::runtime_error("cache record count does not match manifest");
    return batch;
}

}  // namespace mtad
