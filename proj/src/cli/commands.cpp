#include "evopatch/cli/commands.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "evopatch/data/manifest.hpp"
#include "evopatch/data/synthetic.hpp"
#include "evopatch/error.hpp"
#include "evopatch/evolution/engine.hpp"
#include "evopatch/image_io.hpp"
#include "evopatch/nn/serialize.hpp"
#include "evopatch/rng.hpp"

namespace evopatch::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

json read_json_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) {
        throw ValidationError("cannot open: " + path);
    }
    json j;
    try {
        is >> j;
    } catch (const json::exception& e) {
        throw ValidationError(path + ": " + e.what());
    }
    return j;
}

void write_json_file(const fs::path& path, const json& j) {
    std::ofstream os(path);
    if (!os) {
        throw IoError("cannot write: " + path.string());
    }
    os << j.dump(2) << "\n";
    if (!os) {
        throw IoError("write failed: " + path.string());
    }
}

fs::path ensure_out_dir(const std::string& out_dir) {
    if (out_dir.empty()) {
        throw ValidationError("output directory required");
    }
    fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create output directory " + out_dir + ": " + ec.message());
    }
    return dir;
}

geometry::Extent2i uniform_dims(const std::vector<imaging::GrayImage>& images) {
    const geometry::Extent2i dims = images.front().dims();
    for (const auto& img : images) {
        if (!(img.dims() == dims)) {
            throw ValidationError("images must share one size for this command");
        }
    }
    return dims;
}

std::string zero_pad(int value, int width) {
    std::ostringstream os;
    for (int scale = 10, w = 1; w < width; scale *= 10, ++w) {
        if (value < scale) os << "0";
    }
    os << value;
    return os.str();
}

struct PreparedData {
    data::Datasets datasets;
    data::SplitPlan plan;
    std::uint64_t augment_seed = 0;
    geometry::Extent2i dims;
};

PreparedData prepare_from_manifest(const std::string& manifest_path, const RunConfig& cfg,
                                   std::uint64_t split_seed, std::uint64_t augment_seed) {
    data::LoadedDataset loaded = data::load_manifest(manifest_path);
    PreparedData out;
    out.dims = uniform_dims(loaded.images);
    out.plan = data::split_by_subject(loaded.images, cfg.test_frac, cfg.val_frac, split_seed);
    out.augment_seed = augment_seed;
    out.datasets = data::prepare_datasets(loaded.images, loaded.num_classes, out.plan,
                                          cfg.augment_train, cfg.augment, augment_seed);
    return out;
}

PreparedData prepare_with_plan(const std::string& manifest_path, const RunConfig& cfg,
                               const data::SplitPlan& plan, std::uint64_t augment_seed) {
    data::LoadedDataset loaded = data::load_manifest(manifest_path);
    PreparedData out;
    out.dims = uniform_dims(loaded.images);
    out.plan = plan;
    out.augment_seed = augment_seed;
    out.datasets = data::prepare_datasets(loaded.images, loaded.num_classes, plan,
                                          cfg.augment_train, cfg.augment, augment_seed);
    return out;
}

const char* classifier_name(bool proxy) { return proxy ? "proxy" : "cnn"; }

} // namespace

int exit_code_for(const std::function<void()>& fn) {
    try {
        fn();
        return 0;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

std::string cmd_synth(const std::string& spec_path, const std::string& out_dir,
                      std::optional<std::uint64_t> seed) {
    data::SyntheticSpec spec =
        spec_path.empty() ? data::default_synthetic_spec() : data::load_synthetic_spec(spec_path);
    if (seed.has_value()) {
        spec.rng_seed = *seed;
    }
    data::validate_spec(spec);
    const fs::path dir = ensure_out_dir(out_dir);

    const auto images = data::generate_synthetic(spec);
    data::Manifest manifest;
    manifest.num_classes = spec.num_classes;
    for (size_t i = 0; i < images.size(); ++i) {
        const std::string name = "img_" + zero_pad(static_cast<int>(i), 4) + ".png";
        imaging::write_png_gray(images[i], (dir / name).string());
        data::ManifestEntry entry;
        entry.image = name;
        entry.label = images[i].label;
        entry.subject = images[i].subject;
        entry.nose = images[i].nose;
        manifest.entries.push_back(std::move(entry));
    }
    const fs::path manifest_path = dir / "manifest.jsonl";
    data::write_manifest(manifest_path.string(), manifest);
    write_json_file(dir / "truth.json", data::truth_to_json(spec));
    std::cout << manifest_path.string() << "\n";
    return manifest_path.string();
}

void cmd_baseline(const std::string& manifest_path, const RunConfig& cfg, std::uint64_t seed,
                  const std::string& out_dir) {
    const fs::path dir = ensure_out_dir(out_dir);
    const auto t_start = Clock::now();

    const std::uint64_t split_seed = Rng::derive(seed, "split");
    const std::uint64_t augment_seed = Rng::derive(seed, "augment");
    PreparedData prep = prepare_from_manifest(manifest_path, cfg, split_seed, augment_seed);
    const double load_seconds = seconds_since(t_start);

    const auto t_train = Clock::now();
    evolution::BaselineResult result =
        evolution::compute_baseline(prep.datasets, cfg.model, cfg.train, cfg.baseline_runs,
                                    cfg.proxy, Rng::derive(seed, "baseline"));
    const double train_seconds = seconds_since(t_train);

    nn::save_model((dir / "baseline_model.evpm").string(), result.model);

    json out{{"schema", "evopatch.baseline/1"},
             {"classifier", classifier_name(cfg.proxy)},
             {"s_b", result.baseline.s_b},
             {"p_b", result.baseline.p_b},
             {"r_runs", result.baseline.r_runs},
             {"run_val_accuracies", result.baseline.run_val_accuracies},
             {"test_accuracy", result.baseline.test_accuracy},
             {"split", data::split_plan_to_json(prep.plan)},
             {"seeds",
              {{"cli", seed},
               {"split", split_seed},
               {"augment", augment_seed},
               {"baseline", Rng::derive(seed, "baseline")}}},
             {"manifest", manifest_path},
             {"model_path", "baseline_model.evpm"},
             {"timings_path", "timings_baseline.json"},
             {"config", run_config_to_json(cfg)}};
    write_json_file(dir / "baseline.json", out);
    write_json_file(dir / "timings_baseline.json",
                    json{{"schema", "evopatch.timings/1"},
                         {"command", "baseline"},
                         {"phases",
                          {{"load_seconds", load_seconds}, {"train_seconds", train_seconds}}}});
}

void cmd_evolve(const std::string& manifest_path, const std::string& baseline_path,
                const RunConfig& cfg, std::uint64_t seed, const std::string& out_dir) {
    const fs::path dir = ensure_out_dir(out_dir);
    const auto t_start = Clock::now();

    const json bj = read_json_file(baseline_path);
    if (bj.value("schema", "") != "evopatch.baseline/1") {
        throw ValidationError(baseline_path + ": not a baseline file");
    }
    if (bj.at("classifier").get<std::string>() != classifier_name(cfg.proxy)) {
        throw ValidationError("baseline was computed with classifier \"" +
                              bj.at("classifier").get<std::string>() +
                              "\" but this run uses \"" + classifier_name(cfg.proxy) +
                              "\"; accuracies would not be comparable");
    }
    evolution::Baseline baseline;
    baseline.s_b = bj.at("s_b").get<double>();
    baseline.p_b = bj.at("p_b").get<std::int64_t>();
    baseline.r_runs = bj.at("r_runs").get<int>();
    baseline.test_accuracy = bj.at("test_accuracy").get<double>();
    baseline.run_val_accuracies = bj.at("run_val_accuracies").get<std::vector<double>>();
    baseline.model_config = cfg.model;

    const data::SplitPlan plan = data::split_plan_from_json(bj.at("split"));
    const auto augment_seed = bj.at("seeds").at("augment").get<std::uint64_t>();
    PreparedData prep = prepare_with_plan(manifest_path, cfg, plan, augment_seed);
    const double load_seconds = seconds_since(t_start);

    evolution::FitnessCache cache;
    evolution::EvalContext ctx;
    ctx.datasets = &prep.datasets;
    ctx.baseline = baseline;
    ctx.train_config = cfg.train;
    ctx.model_config = cfg.model;
    ctx.proxy = cfg.proxy;
    ctx.w_s = cfg.evo.w_s;
    ctx.run_seed = Rng::derive(seed, "fitness");
    ctx.cache = &cache;

    const auto t_evolve = Clock::now();
    const evolution::EvolveResult evolved = evolution::evolve(
        cfg.evo, prep.dims,
        [&ctx](const geometry::Chromosome& c) { return evolution::evaluate_fitness(c, ctx); },
        Rng::derive(seed, "ga"));
    const double evolve_seconds = seconds_since(t_evolve);

    // Rebuild the winner from its recorded seed (bitwise the model the GA
    // scored) and give it its single look at the test set.
    const auto t_retrain = Clock::now();
    const auto& best = evolved.best;
    double best_test_accuracy = 0.0;
    if (!best.error) {
        const data::StackedSet train = data::to_patch_samples(prep.datasets.train,
                                                              best.chromosome);
        const data::StackedSet val = data::to_patch_samples(prep.datasets.val, best.chromosome);
        const data::StackedSet test = data::to_patch_samples(prep.datasets.test, best.chromosome);
        const auto layers = cfg.proxy
                                ? nn::logreg_layers(prep.datasets.num_classes)
                                : nn::default_cnn_layers(cfg.model, prep.datasets.num_classes);
        nn::Model<float> model(train.shape, layers, Rng::derive(best.train_seed, "init"));
        nn::train(model, train.samples, val.samples, cfg.train,
                  Rng::derive(best.train_seed, "train"));
        best_test_accuracy = nn::evaluate_accuracy(model, test.samples);
        nn::save_model((dir / "best_model.evpm").string(), model);
    }
    const double retrain_seconds = seconds_since(t_retrain);

    geometry::save_chromosome(best.chromosome, (dir / "best_chromosome.json").string());

    json history = json::array();
    for (const auto& g : evolved.history) {
        history.push_back({{"generation", g.generation},
                           {"best_fitness", g.best_fitness},
                           {"mean_fitness", g.mean_fitness},
                           {"best_s", g.best_s},
                           {"best_params", g.best_params}});
    }
    write_json_file(dir / "history.json",
                    json{{"schema", "evopatch.history/1"}, {"generations", history}});

    const double reduction_pct =
        100.0 * static_cast<double>(baseline.p_b - best.p_c) / static_cast<double>(baseline.p_b);
    json report{{"schema", "evopatch.report/1"},
                {"classifier", classifier_name(cfg.proxy)},
                {"baseline",
                 {{"s_b", baseline.s_b},
                  {"p_b", baseline.p_b},
                  {"test_accuracy", baseline.test_accuracy}}},
                {"evofer",
                 {{"fitness", best.fitness},
                  {"s_c", best.s_c},
                  {"p_c", best.p_c},
                  {"test_accuracy", best_test_accuracy},
                  {"error", best.error},
                  {"chromosome", geometry::chromosome_to_json(best.chromosome)}}},
                {"reduction_pct", reduction_pct},
                {"history_path", "history.json"},
                {"chromosome_path", "best_chromosome.json"},
                {"model_path", best.error ? json(nullptr) : json("best_model.evpm")},
                {"timings_path", "timings_evolve.json"},
                {"baseline_path", baseline_path},
                {"seeds",
                 {{"cli", seed},
                  {"split", plan.seed},
                  {"augment", augment_seed},
                  {"ga", Rng::derive(seed, "ga")},
                  {"fitness", ctx.run_seed}}},
                {"config", run_config_to_json(cfg)}};
    write_json_file(dir / "report.json", report);
    write_json_file(dir / "timings_evolve.json",
                    json{{"schema", "evopatch.timings/1"},
                         {"command", "evolve"},
                         {"phases",
                          {{"load_seconds", load_seconds},
                           {"evolve_seconds", evolve_seconds},
                           {"retrain_seconds", retrain_seconds}}}});
}

void cmd_apply(const std::string& manifest_path, const std::string& chromosome_path,
               const RunConfig& cfg, std::uint64_t seed, const std::string& out_dir,
               const std::string& model_path) {
    const fs::path dir = ensure_out_dir(out_dir);
    const geometry::Chromosome chromosome = geometry::load_chromosome(chromosome_path);

    if (!model_path.empty()) {
        // Evaluating an existing model: the whole manifest is the test set.
        data::LoadedDataset loaded = data::load_manifest(manifest_path);
        const data::StackedSet set = data::to_patch_samples(loaded.images, chromosome);
        nn::Model<float> model = nn::load_model(model_path);
        if (!(model.input_shape() == set.shape)) {
            std::ostringstream msg;
            msg << "model expects " << model.input_shape().height << "x"
                << model.input_shape().width << "x" << model.input_shape().channels
                << " input but the chromosome stacks " << set.shape.height << "x"
                << set.shape.width << "x" << set.shape.channels;
            throw DimensionError(msg.str());
        }
        const double accuracy = nn::evaluate_accuracy(model, set.samples);
        write_json_file(dir / "apply.json",
                        json{{"schema", "evopatch.apply/1"},
                             {"mode", "evaluate"},
                             {"accuracy", accuracy},
                             {"images", loaded.images.size()},
                             {"chromosome", geometry::chromosome_to_json(chromosome)},
                             {"model_path", model_path}});
        return;
    }

    const auto t_start = Clock::now();
    const std::uint64_t split_seed = Rng::derive(seed, "split");
    const std::uint64_t augment_seed = Rng::derive(seed, "augment");
    PreparedData prep = prepare_from_manifest(manifest_path, cfg, split_seed, augment_seed);
    const double load_seconds = seconds_since(t_start);

    const data::StackedSet train = data::to_patch_samples(prep.datasets.train, chromosome);
    const data::StackedSet val = data::to_patch_samples(prep.datasets.val, chromosome);
    const data::StackedSet test = data::to_patch_samples(prep.datasets.test, chromosome);
    const int num_classes = prep.datasets.num_classes;
    const auto p_c =
        nn::count_parameters(nn::default_cnn_layers(cfg.model, num_classes), train.shape);

    const auto t_train = Clock::now();
    const std::uint64_t train_seed = Rng::derive(seed, "apply");
    const auto layers = cfg.proxy ? nn::logreg_layers(num_classes)
                                  : nn::default_cnn_layers(cfg.model, num_classes);
    nn::Model<float> model(train.shape, layers, Rng::derive(train_seed, "init"));
    const nn::TrainResult trained =
        nn::train(model, train.samples, val.samples, cfg.train, Rng::derive(train_seed, "train"));
    const double test_accuracy = nn::evaluate_accuracy(model, test.samples);
    const double train_seconds = seconds_since(t_train);

    nn::save_model((dir / "model.evpm").string(), model);
    write_json_file(dir / "apply.json",
                    json{{"schema", "evopatch.apply/1"},
                         {"mode", "train"},
                         {"classifier", classifier_name(cfg.proxy)},
                         {"chromosome", geometry::chromosome_to_json(chromosome)},
                         {"s_c", trained.val_accuracy},
                         {"p_c", p_c},
                         {"test_accuracy", test_accuracy},
                         {"model_path", "model.evpm"},
                         {"timings_path", "timings_apply.json"},
                         {"seeds",
                          {{"cli", seed},
                           {"split", split_seed},
                           {"augment", augment_seed},
                           {"train", train_seed}}},
                         {"config", run_config_to_json(cfg)}});
    write_json_file(dir / "timings_apply.json",
                    json{{"schema", "evopatch.timings/1"},
                         {"command", "apply"},
                         {"phases",
                          {{"load_seconds", load_seconds}, {"train_seconds", train_seconds}}}});
}

void cmd_render(const std::string& manifest_path, const std::string& chromosome_path, int n,
                std::uint64_t seed, const std::string& out_dir) {
    if (n < 1) {
        throw ValidationError("render: n must be >= 1");
    }
    const geometry::Chromosome chromosome = geometry::load_chromosome(chromosome_path);
    data::LoadedDataset loaded = data::load_manifest(manifest_path);
    if (static_cast<size_t>(n) > loaded.images.size()) {
        throw ValidationError("render: asked for " + std::to_string(n) + " images, manifest has " +
                              std::to_string(loaded.images.size()));
    }
    const fs::path dir = ensure_out_dir(out_dir);

    std::vector<int> indices(loaded.images.size());
    std::iota(indices.begin(), indices.end(), 0);
    Rng rng(Rng::derive(seed, "render"));
    rng.shuffle(indices);
    for (int i = 0; i < n; ++i) {
        const auto& img = loaded.images[static_cast<size_t>(indices[static_cast<size_t>(i)])];
        const std::string stem = "render_" + zero_pad(i, 2);
        imaging::write_png_gray(imaging::draw_patch_borders(img, chromosome),
                                (dir / (stem + "_overlay.png")).string());
        for (size_t k = 0; k < chromosome.patches.size(); ++k) {
            imaging::write_png_gray(
                imaging::extract_patch_image(img, chromosome, static_cast<int>(k)),
                (dir / (stem + "_patch" + std::to_string(k) + ".png")).string());
        }
    }
}

void cmd_time(const std::string& manifest_path, const std::string& chromosome_path,
              const RunConfig& cfg, std::uint64_t seed, const std::string& out_dir, int n) {
    if (n < 1) {
        throw ValidationError("time: n must be >= 1");
    }
    const geometry::Chromosome chromosome = geometry::load_chromosome(chromosome_path);
    const fs::path dir = ensure_out_dir(out_dir);

    const std::uint64_t split_seed = Rng::derive(seed, "split");
    const std::uint64_t augment_seed = Rng::derive(seed, "augment");
    PreparedData prep = prepare_from_manifest(manifest_path, cfg, split_seed, augment_seed);
    const int num_classes = prep.datasets.num_classes;

    const data::StackedSet full_train = data::to_full_samples(prep.datasets.train);
    const data::StackedSet full_val = data::to_full_samples(prep.datasets.val);
    const data::StackedSet patch_train = data::to_patch_samples(prep.datasets.train, chromosome);
    const data::StackedSet patch_val = data::to_patch_samples(prep.datasets.val, chromosome);

    const auto full_layers = cfg.proxy ? nn::logreg_layers(num_classes)
                                       : nn::default_cnn_layers(cfg.model, num_classes);

    auto t0 = Clock::now();
    nn::Model<float> full_model(full_train.shape, full_layers,
                                Rng::derive(seed, "time-full-init"));
    nn::train(full_model, full_train.samples, full_val.samples, cfg.train,
              Rng::derive(seed, "time-full-train"));
    const double full_train_seconds = seconds_since(t0);

    t0 = Clock::now();
    nn::Model<float> patch_model(patch_train.shape, full_layers,
                                 Rng::derive(seed, "time-patch-init"));
    nn::train(patch_model, patch_train.samples, patch_val.samples, cfg.train,
              Rng::derive(seed, "time-patch-train"));
    const double patch_train_seconds = seconds_since(t0);

    // Per-image pipeline probe: equalize + stack + predict, n images drawn
    // from the manifest (cycling when n exceeds it).
    data::LoadedDataset loaded = data::load_manifest(manifest_path);
    std::vector<int> indices(loaded.images.size());
    std::iota(indices.begin(), indices.end(), 0);
    Rng rng(Rng::derive(seed, "time"));
    rng.shuffle(indices);

    const auto predict_one = [&](nn::Model<float>& model, const data::StackedSet& one) {
        model.forward(one.samples.x, 1, false, nullptr);
    };

    t0 = Clock::now();
    for (int i = 0; i < n; ++i) {
        const auto& img =
            loaded.images[static_cast<size_t>(indices[static_cast<size_t>(i) % indices.size()])];
        const imaging::GrayImage eq = imaging::hist_equalize(img);
        const data::StackedSet one = data::to_full_samples({eq});
        predict_one(full_model, one);
    }
    const double full_predict_seconds = seconds_since(t0);

    t0 = Clock::now();
    for (int i = 0; i < n; ++i) {
        const auto& img =
            loaded.images[static_cast<size_t>(indices[static_cast<size_t>(i) % indices.size()])];
        const imaging::GrayImage eq = imaging::hist_equalize(img);
        const data::StackedSet one = data::to_patch_samples({eq}, chromosome);
        predict_one(patch_model, one);
    }
    const double patch_predict_seconds = seconds_since(t0);

    write_json_file(
        dir / "timing.json",
        json{{"schema", "evopatch.timing/1"},
             {"classifier", classifier_name(cfg.proxy)},
             {"n", n},
             {"full",
              {{"train_seconds", full_train_seconds},
               {"predict_seconds", full_predict_seconds}}},
             {"patch",
              {{"train_seconds", patch_train_seconds},
               {"predict_seconds", patch_predict_seconds}}},
             {"train_ratio", full_train_seconds / patch_train_seconds},
             {"predict_ratio", full_predict_seconds / patch_predict_seconds},
             {"notes",
              "nose coordinates are precomputed manifest inputs; landmark detection is outside "
              "this pipeline and not part of any measurement"}});
}

} // namespace evopatch::cli
