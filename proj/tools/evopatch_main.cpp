#include <cstdint>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "evopatch/cli/commands.hpp"
#include "evopatch/config.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool proxy = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_seed) {
    cmd->add_option("--config", args.config_path, "run configuration JSON");
    cmd->add_option("--out", args.out_dir, "output directory")->required();
    auto* seed = cmd->add_option("--seed", args.seed, "root seed for all randomness");
    if (needs_seed) {
        seed->required();
    }
    cmd->add_flag("--proxy-classifier", args.proxy,
                  "swap the CNN for a logistic-regression stand-in (fast test mode)");
}

evopatch::RunConfig config_of(const CommonArgs& args) {
    evopatch::RunConfig cfg = evopatch::load_run_config(args.config_path);
    if (args.proxy) {
        cfg.proxy = true;
    }
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"evolve nose-relative image patches that feed a compact classifier"};
    app.require_subcommand(1);

    auto* synth = app.add_subcommand("synth", "generate the synthetic glyph dataset");
    std::string synth_spec;
    std::string synth_out;
    std::uint64_t synth_seed = 0;
    synth->add_option("--spec", synth_spec, "synthetic spec JSON (omit for the default)");
    synth->add_option("--out", synth_out, "output directory")->required();
    auto* synth_seed_opt = synth->add_option("--seed", synth_seed, "overrides the spec's rng_seed");

    auto* baseline = app.add_subcommand("baseline", "train the full-image anchor model");
    CommonArgs baseline_args;
    std::string baseline_manifest;
    add_common(baseline, baseline_args, true);
    baseline->add_option("--manifest", baseline_manifest, "dataset manifest")->required();

    auto* evolve = app.add_subcommand("evolve", "run the GA against a stored baseline");
    CommonArgs evolve_args;
    std::string evolve_manifest;
    std::string evolve_baseline;
    add_common(evolve, evolve_args, true);
    evolve->add_option("--manifest", evolve_manifest, "dataset manifest")->required();
    evolve->add_option("--baseline", evolve_baseline, "baseline.json from the baseline command")
        ->required();

    auto* apply = app.add_subcommand("apply", "train/evaluate one chromosome");
    CommonArgs apply_args;
    std::string apply_manifest;
    std::string apply_chromosome;
    std::string apply_model;
    add_common(apply, apply_args, true);
    apply->add_option("--manifest", apply_manifest, "dataset manifest")->required();
    apply->add_option("--chromosome", apply_chromosome, "chromosome JSON")->required();
    apply->add_option("--model", apply_model,
                      "existing model to evaluate over the whole manifest (skips training)");

    auto* render = app.add_subcommand("render", "write patch overlays and patch crops");
    CommonArgs render_args;
    std::string render_manifest;
    std::string render_chromosome;
    int render_n = 3;
    add_common(render, render_args, true);
    render->add_option("--manifest", render_manifest, "dataset manifest")->required();
    render->add_option("--chromosome", render_chromosome, "chromosome JSON")->required();
    render->add_option("--n", render_n, "number of images to sample");

    auto* time_cmd = app.add_subcommand("time", "wall-clock comparison of both paths");
    CommonArgs time_args;
    std::string time_manifest;
    std::string time_chromosome;
    int time_n = 10;
    add_common(time_cmd, time_args, true);
    time_cmd->add_option("--manifest", time_manifest, "dataset manifest")->required();
    time_cmd->add_option("--chromosome", time_chromosome, "chromosome JSON")->required();
    time_cmd->add_option("--n", time_n, "number of images to process");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    return evopatch::cli::exit_code_for([&] {
        if (synth->parsed()) {
            std::optional<std::uint64_t> seed;
            if (synth_seed_opt->count() > 0) {
                seed = synth_seed;
            }
            evopatch::cli::cmd_synth(synth_spec, synth_out, seed);
        } else if (baseline->parsed()) {
            evopatch::cli::cmd_baseline(baseline_manifest, config_of(baseline_args),
                                        baseline_args.seed, baseline_args.out_dir);
        } else if (evolve->parsed()) {
            evopatch::cli::cmd_evolve(evolve_manifest, evolve_baseline, config_of(evolve_args),
                                      evolve_args.seed, evolve_args.out_dir);
        } else if (apply->parsed()) {
            evopatch::cli::cmd_apply(apply_manifest, apply_chromosome, config_of(apply_args),
                                     apply_args.seed, apply_args.out_dir, apply_model);
        } else if (render->parsed()) {
            evopatch::cli::cmd_render(render_manifest, render_chromosome, render_n,
                                      render_args.seed, render_args.out_dir);
        } else if (time_cmd->parsed()) {
            evopatch::cli::cmd_time(time_manifest, time_chromosome, config_of(time_args),
                                    time_args.seed, time_args.out_dir, time_n);
        }
    });
}
