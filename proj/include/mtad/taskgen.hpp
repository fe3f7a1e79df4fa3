#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mtad/image.hpp"

namespace mtad {

// The four pretext tasks. Values double as the u8 task ids of the on-disk
// batch cache format.
enum class TaskId : uint8_t { VTrans = 0, HTrans = 1, Rot = 2, Puzz = 3 };

constexpr std::array<TaskId, 4> kAllTasks = {TaskId::VTrans, TaskId::HTrans, TaskId::Rot,
                                             TaskId::Puzz};

const char* task_name(TaskId t);
TaskId task_from_name(const std::string& name);

// Geometric task parameters: translation magnitudes in pixels and the
// quarter-turn rotation classes.
struct GeoTaskSpec {
    int t_x = 0;  // horizontal shift magnitude, 0 < t_x < W
    int t_y = 0;  // vertical shift magnitude, 0 < t_y < H
    std::array<int, 4> rotation_set = {0, 1, 2, 3};
};

// Default magnitudes: floor(side/8), at least 1.
GeoTaskSpec default_geo_spec(int h, int w);

using Permutation = std::vector<int>;

// Simplified jigsaw task parameters.
struct JigsawSpec {
    int n_h = 3;
    int n_w = 3;
    int k = 3;                 // number of permutation classes, identity first
    double margin_frac = 0.1;  // margin = round(margin_frac * cell side)
    int jitter_px = -1;        // -1: use the margin as jitter bound
    std::vector<Permutation> permutations;
};

// Throws std::invalid_argument on violated invariants (k range, identity
// first, distinctness, bijectivity).
void validate_jigsaw_spec(const JigsawSpec& spec);

// JigsawSpec with k permutations of an n_h x n_w grid drawn from `seed`.
JigsawSpec default_jigsaw_spec(int n_h, int n_w, int k, uint64_t seed);

// Transformed images paired with (task, class) targets.
struct LabeledTaskBatch {
    std::vector<ImageTensor> images;
    std::vector<TaskId> task_ids;
    std::vector<int> class_labels;

    size_t size() const { return images.size(); }
    void push(ImageTensor img, TaskId t, int label);
};

// Class counts per task: v=3, h=3, rot=4, puzz=k.
int task_class_count(TaskId t, int k);

// Shift by (dx, dy); vacated pixels filled by edge replication.
// Rejects |dx| >= W or |dy| >= H.
ImageTensor apply_translation(const ImageTensor& img, int dx, int dy);

// Exact rotation by quarter_turns * 90 degrees counterclockwise.
// Output dims swap for odd turn counts.
ImageTensor apply_rotation(const ImageTensor& img, int quarter_turns);

// k distinct permutations of {0..n_cells-1}; index 0 is the identity, the
// rest drawn uniformly without replacement from the non-identity
// permutations. Deterministic given seed.
std::vector<Permutation> sample_permutations(int n_cells, int k, uint64_t seed);

// Jigsaw shuffle: the image is cut into n_h x n_w cells; from each cell a
// patch inset by the margin and displaced by a per-patch random offset in
// [-jitter, +jitter]^2 is extracted; output cell i receives the patch of
// input cell permutations[perm_index][i]; uncovered canvas pixels take the
// per-image per-channel mean.
ImageTensor apply_jigsaw(const ImageTensor& img, const JigsawSpec& spec, int perm_index,
                         uint64_t rng_seed);

// Derived jigsaw geometry for one axis: cell side, margin, patch side, jitter.
struct JigsawGeometry {
    int cell_h, cell_w;
    int margin_h, margin_w;
    int patch_h, patch_w;
    int jitter_h, jitter_w;
};
JigsawGeometry jigsaw_geometry(int h, int w, const JigsawSpec& spec);

// All 3+3+4+k labeled variants of every input image, in input order with a
// fixed variant order (v, h, rot, puzz). Deterministic given seed.
LabeledTaskBatch generate_task_dataset(const std::vector<ImageTensor>& images,
                                       const GeoTaskSpec& geo, const JigsawSpec& jig,
                                       uint64_t seed);

// Transform an image to the given (task, class) variant. `jitter_seed` only
// affects puzzle variants.
ImageTensor apply_task_variant(const ImageTensor& img, TaskId task, int label,
                               const GeoTaskSpec& geo, const JigsawSpec& jig,
                               uint64_t jitter_seed);

// --- on-disk batch cache ---------------------------------------------------
// Little-endian records: u32 H, u32 W, u32 C, u8 task_id, u8 label, then
// H*W*C float32 pixels. Records live in records_00000.bin shards next to a
// manifest.json carrying seeds and spec parameters.

void write_batch_cache(const std::string& dir, const LabeledTaskBatch& batch,
                       const GeoTaskSpec& geo, const JigsawSpec& jig, uint64_t seed,
                       size_t records_per_shard = 4096);

LabeledTaskBatch read_batch_cache(const std::string& dir);

}  // namespace mtad
