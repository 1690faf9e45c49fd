#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "evopatch/imaging.hpp"

namespace evopatch::data {

// Rectangle anchored at the nose, like a patch offset plus a size.
struct GlyphRegion {
    int x = 0;
    int y = 0;
    int width = 0;
    int height = 0;
    bool operator==(const GlyphRegion&) const = default;
};

// Recipe for the synthetic stand-in dataset: per-subject base faces that
// carry no class information, plus class-discriminative glyph patterns
// confined to the declared nose-relative regions. Everything the label can
// tell you lives inside glyph_regions by construction, which is what makes
// region-discovery scoring against this ground truth meaningful.
struct SyntheticSpec {
    int image_size = 128;
    int num_classes = 3;
    int subjects_per_class = 6;
    int images_per_subject = 8;
    std::vector<std::vector<GlyphRegion>> glyph_regions; // indexed by class
    int jitter = 2;
    // Regions are tiled into glyph_cell x glyph_cell cells and each cell is
    // drawn with probability glyph_presence per image. Below 1.0 a small
    // sliver of a region becomes an unreliable cue, so classifiers are
    // rewarded for covering whole regions rather than clipping corners.
    int glyph_cell = 14;
    double glyph_presence = 0.7;
    // Amplitude of a smooth per-image brightness field (label-blind, like a
    // lighting change). It shifts broad-area sums image to image, which
    // keeps a classifier from riding subject textures, while bar-period
    // glyph reads sit far above its spatial frequency and stay readable.
    double lighting_noise = 16.0;
    std::uint64_t rng_seed = 0;
};

// Spec with shared "eyes" and "mouth" bands for three classes.
SyntheticSpec default_synthetic_spec();

// Throws ValidationError when a region can leave the image under any nose
// jitter, or counts are out of range.
void validate_spec(const SyntheticSpec& spec);

// One image per (subject, image_index). Subject k gets label k % num_classes
// and id "sNN". The base face and nose depend only on (rng_seed, subject);
// the glyph phase jitter also on image_index; the pattern only on the label.
// Two renders that differ only in label are therefore pixel-identical
// outside the label's glyph regions.
imaging::GrayImage render_synthetic_image(const SyntheticSpec& spec, int subject_index, int label,
                                          int image_index);

std::vector<imaging::GrayImage> generate_synthetic(const SyntheticSpec& spec);

// Spec file: {"schema": "evopatch.synthspec/1", ...}.
nlohmann::json synthetic_spec_to_json(const SyntheticSpec& spec);
SyntheticSpec synthetic_spec_from_json(const nlohmann::json& j);
SyntheticSpec load_synthetic_spec(const std::string& path);

// Ground truth file: {"schema": "evopatch.truth/1", "glyph_regions": ...},
// written next to a synthesized dataset and consumed by region scoring.
nlohmann::json truth_to_json(const SyntheticSpec& spec);
std::vector<std::vector<GlyphRegion>> truth_regions_from_json(const nlohmann::json& j);
std::vector<std::vector<GlyphRegion>> load_truth_regions(const std::string& path);

} // namespace evopatch::data
