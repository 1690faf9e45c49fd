#include "evopatch/data/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "evopatch/error.hpp"
#include "evopatch/image_io.hpp"

namespace evopatch::data {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kSchema = "evopatch.manifest/1";

[[noreturn]] void fail_lines(const std::string& path, const std::vector<std::string>& errors) {
    std::ostringstream msg;
    msg << path << ": " << errors.size() << " bad manifest "
        << (errors.size() == 1 ? "entry" : "entries");
    for (const auto& e : errors) {
        msg << "\n  " << e;
    }
    throw ValidationError(msg.str());
}

} // namespace

Manifest read_manifest(const std::string& path) {
    std::ifstream is(path);
    if (!is) {
        throw ValidationError("cannot open manifest: " + path);
    }
    Manifest manifest;
    std::vector<std::string> errors;
    std::string line;
    int line_no = 0;
    bool have_header = false;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        json row;
        try {
            row = json::parse(line);
        } catch (const json::exception& e) {
            errors.push_back("line " + std::to_string(line_no) + ": " + e.what());
            continue;
        }
        try {
            if (!have_header) {
                if (row.value("schema", "") != kSchema) {
                    throw ValidationError("first line must declare schema " + std::string(kSchema));
                }
                manifest.num_classes = row.at("num_classes").get<int>();
                if (manifest.num_classes < 2) {
                    throw ValidationError("num_classes must be >= 2");
                }
                have_header = true;
                continue;
            }
            ManifestEntry entry;
            entry.image = row.at("image").get<std::string>();
            entry.label = row.at("label").get<int>();
            entry.subject = row.at("subject").get<std::string>();
            const auto& nose = row.at("nose");
            if (!nose.is_array() || nose.size() != 2) {
                throw ValidationError("nose must be [x, y]");
            }
            entry.nose = {nose[0].get<int>(), nose[1].get<int>()};
            if (entry.label < 0 || entry.label >= manifest.num_classes) {
                throw ValidationError("label " + std::to_string(entry.label) +
                                      " outside [0, " + std::to_string(manifest.num_classes) +
                                      ")");
            }
            if (entry.subject.empty()) {
                throw ValidationError("empty subject id");
            }
            manifest.entries.push_back(std::move(entry));
        } catch (const std::exception& e) {
            errors.push_back("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!have_header && errors.empty()) {
        throw ValidationError("empty manifest: " + path);
    }
    if (!errors.empty()) {
        fail_lines(path, errors);
    }
    if (manifest.entries.empty()) {
        throw ValidationError("manifest has a header but no entries: " + path);
    }
    return manifest;
}

void write_manifest(const std::string& path, const Manifest& manifest) {
    std::ofstream os(path);
    if (!os) {
        throw IoError("cannot open manifest for writing: " + path);
    }
    json header{{"schema", kSchema}, {"num_classes", manifest.num_classes}};
    os << header.dump() << "\n";
    for (const auto& entry : manifest.entries) {
        json row{{"image", entry.image},
                 {"label", entry.label},
                 {"subject", entry.subject},
                 {"nose", {entry.nose.x, entry.nose.y}}};
        os << row.dump() << "\n";
    }
    if (!os) {
        throw IoError("manifest write failed: " + path);
    }
}

LoadedDataset load_manifest(const std::string& path) {
    const Manifest manifest = read_manifest(path);
    const fs::path base = fs::path(path).parent_path();

    LoadedDataset out;
    out.num_classes = manifest.num_classes;
    out.images.resize(manifest.entries.size());
    std::vector<std::string> errors;
    for (size_t i = 0; i < manifest.entries.size(); ++i) {
        const auto& entry = manifest.entries[i];
        // Header is line 1, entry i is line i + 2.
        const std::string where = "line " + std::to_string(i + 2) + " (" + entry.image + "): ";
        try {
            fs::path img_path = entry.image;
            if (img_path.is_relative()) {
                img_path = base / img_path;
            }
            imaging::GrayImage img = imaging::load_gray_image(img_path.string());
            if (entry.nose.x < 0 || entry.nose.x >= img.width || entry.nose.y < 0 ||
                entry.nose.y >= img.height) {
                throw ValidationError("nose (" + std::to_string(entry.nose.x) + ", " +
                                      std::to_string(entry.nose.y) + ") outside " +
                                      std::to_string(img.width) + "x" +
                                      std::to_string(img.height) + " image");
            }
            img = imaging::hist_equalize(img);
            img.nose = entry.nose;
            img.label = entry.label;
            img.subject = entry.subject;
            out.images[i] = std::move(img);
        } catch (const std::exception& e) {
            errors.push_back(where + e.what());
        }
    }
    if (!errors.empty()) {
        fail_lines(path, errors);
    }
    return out;
}

} // namespace evopatch::data
