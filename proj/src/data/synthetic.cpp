#include "evopatch/data/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "evopatch/error.hpp"
#include "evopatch/rng.hpp"

namespace evopatch::data {

using nlohmann::json;

namespace {

constexpr const char* kSpecSchema = "evopatch.synthspec/1";
constexpr const char* kTruthSchema = "evopatch.truth/1";

std::string subject_id(int subject_index) {
    std::ostringstream os;
    os << "s" << (subject_index < 10 ? "0" : "") << subject_index;
    return os.str();
}

// Smooth per-subject texture: one coarse and one fine lattice of random
// values, bilinearly interpolated.
struct ValueNoise {
    int grid = 16;
    int nx = 0, ny = 0;
    std::vector<double> values;

    ValueNoise(int size, int grid_step, Rng& rng) : grid(grid_step) {
        nx = size / grid + 2;
        ny = size / grid + 2;
        values.resize(static_cast<size_t>(nx) * ny);
        for (auto& v : values) v = rng.uniform01() * 2.0 - 1.0;
    }

    double at(int x, int y) const {
        const double fx = static_cast<double>(x) / grid;
        const double fy = static_cast<double>(y) / grid;
        const int ix = static_cast<int>(fx);
        const int iy = static_cast<int>(fy);
        const double tx = fx - ix;
        const double ty = fy - iy;
        const auto v = [&](int gx, int gy) { return values[static_cast<size_t>(gy) * nx + gx]; };
        const double top = v(ix, iy) * (1.0 - tx) + v(ix + 1, iy) * tx;
        const double bot = v(ix, iy + 1) * (1.0 - tx) + v(ix + 1, iy + 1) * tx;
        return top * (1.0 - ty) + bot * ty;
    }
};

// Bar orientation is the class discriminator; the phase wobbles with the
// per-image jitter but the orientation never does.
constexpr double kBarPeriod = 16.0;

double bar_phase(int label, int num_classes, double x, double y) {
    const double theta = 3.14159265358979323846 * label / num_classes;
    const double t = x * std::cos(theta) + y * std::sin(theta);
    return t - kBarPeriod * std::floor(t / kBarPeriod);
}

// Paint one cell of the bar pattern: the lower half of its pixels by phase
// gets the dark value, the rest the bright one. Splitting at the phase
// median instead of a fixed threshold keeps the dark/bright pixel counts
// independent of orientation, so the image histogram carries no class
// information and per-image equalization cannot smuggle the label into
// pixels outside the glyph regions.
void paint_cell(imaging::GrayImage& img, int left, int top, int x0, int y0, int x1, int y1,
                int label, int num_classes, int jx, int jy) {
    std::vector<std::pair<double, int>> order;
    order.reserve(static_cast<size_t>(x1 - x0) * (y1 - y0));
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            order.emplace_back(bar_phase(label, num_classes, x - jx, y - jy),
                               static_cast<int>(order.size()));
        }
    }
    std::sort(order.begin(), order.end());
    const int width = x1 - x0;
    for (size_t i = 0; i < order.size(); ++i) {
        const int idx = order[i].second;
        const int x = x0 + idx % width;
        const int y = y0 + idx / width;
        img.at(left + x, top + y) = i < order.size() / 2 ? 40 : 215;
    }
}

} // namespace

SyntheticSpec default_synthetic_spec() {
    SyntheticSpec spec;
    // The vertical gap between the bands exceeds the largest patch height,
    // so no single patch can cover cells of both and a chromosome has to
    // spend separate genes on them.
    spec.glyph_regions.assign(
        spec.num_classes,
        {GlyphRegion{-30, -40, 60, 26}, GlyphRegion{-22, 16, 44, 26}});
    return spec;
}

void validate_spec(const SyntheticSpec& spec) {
    if (spec.image_size < 16) {
        throw ValidationError("synthetic: image_size must be >= 16");
    }
    if (spec.num_classes < 2) {
        throw ValidationError("synthetic: num_classes must be >= 2");
    }
    if (spec.subjects_per_class < 1 || spec.images_per_subject < 1) {
        throw ValidationError("synthetic: subjects_per_class and images_per_subject must be >= 1");
    }
    if (spec.jitter < 0) {
        throw ValidationError("synthetic: jitter must be >= 0");
    }
    if (spec.glyph_cell < 1) {
        throw ValidationError("synthetic: glyph_cell must be >= 1");
    }
    if (spec.glyph_presence < 0.0 || spec.glyph_presence > 1.0) {
        throw ValidationError("synthetic: glyph_presence must be in [0, 1]");
    }
    if (spec.lighting_noise < 0.0) {
        throw ValidationError("synthetic: lighting_noise must be >= 0");
    }
    if (spec.glyph_regions.size() != static_cast<size_t>(spec.num_classes)) {
        throw ValidationError("synthetic: need one glyph-region list per class");
    }
    const int center = spec.image_size / 2;
    for (size_t cls = 0; cls < spec.glyph_regions.size(); ++cls) {
        if (spec.glyph_regions[cls].empty()) {
            throw ValidationError("synthetic: class " + std::to_string(cls) +
                                  " has no glyph regions");
        }
        for (const auto& r : spec.glyph_regions[cls]) {
            if (r.width < 1 || r.height < 1) {
                throw ValidationError("synthetic: glyph region with empty extent");
            }
            // The nose wanders center +- jitter; the region must fit for
            // every position it can take.
            const bool fits = center - spec.jitter + r.x >= 0 &&
                              center + spec.jitter + r.x + r.width <= spec.image_size &&
                              center - spec.jitter + r.y >= 0 &&
                              center + spec.jitter + r.y + r.height <= spec.image_size;
            if (!fits) {
                std::ostringstream msg;
                msg << "synthetic: class " << cls << " region (" << r.x << ", " << r.y << ", "
                    << r.width << "x" << r.height << ") leaves the " << spec.image_size << "x"
                    << spec.image_size << " image under jitter " << spec.jitter;
                throw ValidationError(msg.str());
            }
        }
    }
}

imaging::GrayImage render_synthetic_image(const SyntheticSpec& spec, int subject_index, int label,
                                          int image_index) {
    validate_spec(spec);
    if (label < 0 || label >= spec.num_classes) {
        throw ValidationError("synthetic: label out of range");
    }

    const int size = spec.image_size;
    const int center = size / 2;
    const uint64_t subject_seed =
        Rng::derive(spec.rng_seed, "subject", static_cast<uint64_t>(subject_index));
    Rng subject_rng(subject_seed);

    imaging::GrayImage img;
    img.width = size;
    img.height = size;
    img.data.resize(static_cast<size_t>(size) * size);
    img.label = label;
    img.subject = subject_id(subject_index);

    // Base face: everything here depends on the subject alone.
    img.nose.x = center + subject_rng.uniform_int(-spec.jitter, spec.jitter);
    img.nose.y = center + subject_rng.uniform_int(-spec.jitter, spec.jitter);
    ValueNoise coarse(size, 16, subject_rng);
    ValueNoise fine(size, 4, subject_rng);
    const double ax = 0.42 * size;
    const double ay = 0.48 * size;
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            double v = 110.0 + 20.0 * coarse.at(x, y) + 8.0 * fine.at(x, y);
            const double ex = (x - center) / ax;
            const double ey = (y - center) / ay;
            if (ex * ex + ey * ey <= 1.0) {
                v += 35.0;
            }
            img.at(x, y) = static_cast<uint8_t>(std::clamp(std::lround(v), 0L, 255L));
        }
    }

    // Everything per-image comes from a stream that never sees the label, so
    // same-subject renders differ only inside glyph regions. The lighting
    // field is drawn first, before any label-dependent consumption.
    Rng image_rng(Rng::derive(subject_seed, "image", static_cast<uint64_t>(image_index)));
    std::optional<ValueNoise> lighting;
    if (spec.lighting_noise > 0.0) {
        lighting.emplace(size, 16, image_rng);
    }

    // Glyphs: overwrite the label's regions with its stripe pattern, cell by
    // cell.
    for (const auto& r : spec.glyph_regions[static_cast<size_t>(label)]) {
        const int jx = image_rng.uniform_int(-spec.jitter, spec.jitter);
        const int jy = image_rng.uniform_int(-spec.jitter, spec.jitter);
        const int left = img.nose.x + r.x;
        const int top = img.nose.y + r.y;
        for (int cy = 0; cy < r.height; cy += spec.glyph_cell) {
            for (int cx = 0; cx < r.width; cx += spec.glyph_cell) {
                const bool active = image_rng.bernoulli(spec.glyph_presence);
                if (!active) {
                    continue;
                }
                const int yend = std::min(cy + spec.glyph_cell, r.height);
                const int xend = std::min(cx + spec.glyph_cell, r.width);
                paint_cell(img, left, top, cx, cy, xend, yend, label, spec.num_classes, jx, jy);
            }
        }
    }

    if (lighting) {
        for (int y = 0; y < size; ++y) {
            for (int x = 0; x < size; ++x) {
                const double v = img.at(x, y) + spec.lighting_noise * lighting->at(x, y);
                img.at(x, y) = static_cast<uint8_t>(std::clamp(std::lround(v), 0L, 255L));
            }
        }
    }
    return img;
}

std::vector<imaging::GrayImage> generate_synthetic(const SyntheticSpec& spec) {
    validate_spec(spec);
    std::vector<imaging::GrayImage> images;
    const int subjects = spec.subjects_per_class * spec.num_classes;
    images.reserve(static_cast<size_t>(subjects) * spec.images_per_subject);
    for (int s = 0; s < subjects; ++s) {
        const int label = s % spec.num_classes;
        for (int j = 0; j < spec.images_per_subject; ++j) {
            images.push_back(render_synthetic_image(spec, s, label, j));
        }
    }
    return images;
}

json synthetic_spec_to_json(const SyntheticSpec& spec) {
    json regions = json::array();
    for (const auto& cls : spec.glyph_regions) {
        json list = json::array();
        for (const auto& r : cls) {
            list.push_back({{"x", r.x}, {"y", r.y}, {"width", r.width}, {"height", r.height}});
        }
        regions.push_back(std::move(list));
    }
    return json{{"schema", kSpecSchema},
                {"image_size", spec.image_size},
                {"num_classes", spec.num_classes},
                {"subjects_per_class", spec.subjects_per_class},
                {"images_per_subject", spec.images_per_subject},
                {"glyph_regions", std::move(regions)},
                {"jitter", spec.jitter},
                {"glyph_cell", spec.glyph_cell},
                {"glyph_presence", spec.glyph_presence},
                {"lighting_noise", spec.lighting_noise},
                {"rng_seed", spec.rng_seed}};
}

SyntheticSpec synthetic_spec_from_json(const json& j) {
    if (j.value("schema", "") != kSpecSchema) {
        throw ValidationError("synthetic spec: expected schema " + std::string(kSpecSchema));
    }
    SyntheticSpec spec;
    spec.image_size = j.value("image_size", spec.image_size);
    spec.num_classes = j.value("num_classes", spec.num_classes);
    spec.subjects_per_class = j.value("subjects_per_class", spec.subjects_per_class);
    spec.images_per_subject = j.value("images_per_subject", spec.images_per_subject);
    spec.jitter = j.value("jitter", spec.jitter);
    spec.glyph_cell = j.value("glyph_cell", spec.glyph_cell);
    spec.glyph_presence = j.value("glyph_presence", spec.glyph_presence);
    spec.lighting_noise = j.value("lighting_noise", spec.lighting_noise);
    spec.rng_seed = j.value("rng_seed", spec.rng_seed);
    if (j.contains("glyph_regions")) {
        spec.glyph_regions.clear();
        for (const auto& cls : j.at("glyph_regions")) {
            std::vector<GlyphRegion> list;
            for (const auto& r : cls) {
                list.push_back(GlyphRegion{r.at("x").get<int>(), r.at("y").get<int>(),
                                           r.at("width").get<int>(), r.at("height").get<int>()});
            }
            spec.glyph_regions.push_back(std::move(list));
        }
    } else {
        spec.glyph_regions = default_synthetic_spec().glyph_regions;
        spec.glyph_regions.resize(static_cast<size_t>(spec.num_classes),
                                  spec.glyph_regions.front());
    }
    validate_spec(spec);
    return spec;
}

SyntheticSpec load_synthetic_spec(const std::string& path) {
    std::ifstream is(path);
    if (!is) {
        throw ValidationError("cannot open synthetic spec: " + path);
    }
    json j;
    try {
        is >> j;
    } catch (const json::exception& e) {
        throw ValidationError("synthetic spec " + path + ": " + e.what());
    }
    return synthetic_spec_from_json(j);
}

json truth_to_json(const SyntheticSpec& spec) {
    json j = synthetic_spec_to_json(spec);
    j["schema"] = kTruthSchema;
    return j;
}

std::vector<std::vector<GlyphRegion>> truth_regions_from_json(const json& j) {
    if (j.value("schema", "") != kTruthSchema) {
        throw ValidationError("truth file: expected schema " + std::string(kTruthSchema));
    }
    std::vector<std::vector<GlyphRegion>> regions;
    for (const auto& cls : j.at("glyph_regions")) {
        std::vector<GlyphRegion> list;
        for (const auto& r : cls) {
            list.push_back(GlyphRegion{r.at("x").get<int>(), r.at("y").get<int>(),
                                       r.at("width").get<int>(), r.at("height").get<int>()});
        }
        regions.push_back(std::move(list));
    }
    if (regions.empty()) {
        throw ValidationError("truth file: no glyph regions");
    }
    return regions;
}

std::vector<std::vector<GlyphRegion>> load_truth_regions(const std::string& path) {
    std::ifstream is(path);
    if (!is) {
        throw ValidationError("cannot open truth file: " + path);
    }
    json j;
    try {
        is >> j;
    } catch (const json::exception& e) {
        throw ValidationError("truth file " + path + ": " + e.what());
    }
    return truth_regions_from_json(j);
}

} // namespace evopatch::data
