#include "evopatch/geometry.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "evopatch/error.hpp"

namespace evopatch::geometry {

PatchRect unclamped_rect(const PatchOffset& offset, const Point2i& nose, int alpha, int beta) {
    return PatchRect{nose.x + offset.x, nose.y + offset.y, alpha, beta};
}

PatchRect resolve_rect(const PatchOffset& offset, const Point2i& nose, int alpha, int beta,
                       const Extent2i& image_dims) {
    if (image_dims.width <= 0 || image_dims.height <= 0) {
        throw DimensionError("resolve_rect: image dimensions must be positive");
    }
    if (alpha > image_dims.width || beta > image_dims.height) {
        std::ostringstream msg;
        msg << "resolve_rect: patch " << alpha << "x" << beta << " does not fit in "
            << image_dims.width << "x" << image_dims.height << " image";
        throw DimensionError(msg.str());
    }
    PatchRect r = unclamped_rect(offset, nose, alpha, beta);
    r.left = std::clamp(r.left, 0, image_dims.width - alpha);
    r.top = std::clamp(r.top, 0, image_dims.height - beta);
    return r;
}

std::string chromosome_signature(const Chromosome& c) {
    std::vector<PatchOffset> sorted = c.patches;
    std::sort(sorted.begin(), sorted.end(), [](const PatchOffset& a, const PatchOffset& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    std::ostringstream out;
    out << "a" << c.alpha << "b" << c.beta;
    for (const PatchOffset& p : sorted) {
        out << ";" << p.x << "," << p.y;
    }
    return out.str();
}

nlohmann::json chromosome_to_json(const Chromosome& c) {
    nlohmann::json patches = nlohmann::json::array();
    for (const PatchOffset& p : c.patches) {
        patches.push_back({p.x, p.y});
    }
    return nlohmann::json{{"alpha", c.alpha}, {"beta", c.beta}, {"patches", patches}};
}

Chromosome chromosome_from_json(const nlohmann::json& j) {
    Chromosome c;
    try {
        c.alpha = j.at("alpha").get<int>();
        c.beta = j.at("beta").get<int>();
        for (const auto& p : j.at("patches")) {
            if (!p.is_array() || p.size() != 2) {
                throw ValidationError("chromosome: each patch must be an [x, y] pair");
            }
            c.patches.push_back({p[0].get<int>(), p[1].get<int>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("chromosome: malformed JSON: ") + e.what());
    }
    if (c.alpha <= 0 || c.beta <= 0) {
        throw ValidationError("chromosome: alpha and beta must be positive");
    }
    if (c.patches.empty()) {
        throw ValidationError("chromosome: at least one patch required");
    }
    return c;
}

Chromosome load_chromosome(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open chromosome file: " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("chromosome: invalid JSON in " + path + ": " + e.what());
    }
    return chromosome_from_json(j);
}

void save_chromosome(const Chromosome& c, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write chromosome file: " + path);
    }
    out << chromosome_to_json(c).dump(2) << "\n";
}

} // namespace evopatch::geometry
