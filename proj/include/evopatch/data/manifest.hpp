#pragma once

#include <string>
#include <vector>

#include "evopatch/imaging.hpp"

namespace evopatch::data {

// One dataset row. image paths are stored as written; relative paths are
// resolved against the manifest's directory at load time.
struct ManifestEntry {
    std::string image;
    int label = 0;
    std::string subject;
    geometry::Point2i nose;
};

// JSON Lines file. First line declares the schema and the class count, each
// following line is one entry:
//   {"schema": "evopatch.manifest/1", "num_classes": 3}
//   {"image": "img_0000.png", "label": 0, "subject": "s00", "nose": [64, 66]}
struct Manifest {
    int num_classes = 0;
    std::vector<ManifestEntry> entries;
};

Manifest read_manifest(const std::string& path);
void write_manifest(const std::string& path, const Manifest& manifest);

// Datasets as the pipeline consumes them: parse the manifest, load every
// image (PNG or PGM, color converted to gray), histogram-equalize, attach
// nose/label/subject. Per-entry problems are collected and reported together
// with their line numbers; any failure aborts the load.
struct LoadedDataset {
    std::vector<imaging::GrayImage> images;
    int num_classes = 0;
};

LoadedDataset load_manifest(const std::string& path);

} // namespace evopatch::data
