#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "evopatch/config.hpp"

namespace evopatch::cli {

// Commands throw on failure; exit_code_for maps the exception taxonomy to
// the process contract: 0 success, 2 validation/usage, 3 runtime failure.
// Tests drive the commands in-process through this.
int exit_code_for(const std::function<void()>& fn);

// Generate a synthetic dataset: images as PNG, a manifest, and the
// ground-truth glyph regions. A seed override replaces the spec's rng_seed.
// Returns the manifest path.
std::string cmd_synth(const std::string& spec_path, const std::string& out_dir,
                      std::optional<std::uint64_t> seed);

// Split, augment, train the full-image model r_runs times; writes
// baseline.json (anchors, split plan, seeds) and baseline_model.evpm.
void cmd_baseline(const std::string& manifest_path, const RunConfig& cfg, std::uint64_t seed,
                  const std::string& out_dir);

// Run the GA against a stored baseline, retrain the winner, evaluate it on
// the held-out test set; writes report.json, history.json,
// best_chromosome.json, best_model.evpm, and timings (wall clock lives in
// its own file so reports stay byte-stable).
void cmd_evolve(const std::string& manifest_path, const std::string& baseline_path,
                const RunConfig& cfg, std::uint64_t seed, const std::string& out_dir);

// Train and test one given chromosome (fresh split from the config), or,
// with model_path set, only evaluate that model over the whole manifest.
void cmd_apply(const std::string& manifest_path, const std::string& chromosome_path,
               const RunConfig& cfg, std::uint64_t seed, const std::string& out_dir,
               const std::string& model_path = "");

// For n sampled images, write the original with patch borders burned in and
// each extracted patch as its own image.
void cmd_render(const std::string& manifest_path, const std::string& chromosome_path, int n,
                std::uint64_t seed, const std::string& out_dir);

// Wall-clock comparison of the full-image and patch paths: training probes
// plus preprocess+predict over n sampled images. Purely informational
// output; the measured values are not expected to be reproducible.
void cmd_time(const std::string& manifest_path, const std::string& chromosome_path,
              const RunConfig& cfg, std::uint64_t seed, const std::string& out_dir, int n = 10);

} // namespace evopatch::cli
