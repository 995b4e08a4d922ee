// Command-line front end: one binary, one subcommand per pipeline stage.
//
// Exit codes: 0 success, 2 usage / validation / I/O errors, 3 runtime errors.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "graspsynth/config.hpp"
#include "graspsynth/error.hpp"
#include "graspsynth/eval.hpp"
#include "graspsynth/io.hpp"

namespace fs = std::filesystem;
using namespace graspsynth;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

// Options shared by every subcommand that runs part of the pipeline.
struct Common {
    std::string config_path;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> jobs;
    std::string gripper_path;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config_path, "key = value config file")->check(CLI::ExistingFile);
    cmd->add_option("--set", c.overrides, "config override key=value (repeatable)");
    cmd->add_option("--seed", c.seed, "master seed (falls back to GRASPSYNTH_SEED, then the config)");
    cmd->add_option("--jobs", c.jobs, "worker threads");
    cmd->add_option("--gripper", c.gripper_path, "gripper JSON (default: built-in wsg50)");
}

// Config file, then GRASPSYNTH_SEED, then flags.
PipelineConfig resolve_config(const Common& c) {
    PipelineConfig cfg = c.config_path.empty() ? PipelineConfig{} : load_config(c.config_path);
    if (const char* env = std::getenv("GRASPSYNTH_SEED"); env && *env) cfg.set("seed", env);
    for (const auto& kv : c.overrides) {
        const auto eq = kv.find('=');
        require(eq != std::string::npos, "--set expects key=value, got '" + kv + "'");
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (c.seed) cfg.seed = *c.seed;
    if (c.jobs) cfg.jobs = *c.jobs;
    cfg.validate();
    return cfg;
}

GripperModel load_gripper(const Common& c) {
    if (c.gripper_path.empty()) return default_gripper();
    GripperModel g = gripper_from_json(read_json(c.gripper_path));
    g.validate();
    return g;
}

void check_gripper(const ModelBundle& b, const GripperModel& g) {
    if (b.gripper != g.name) {
        fail(ErrorKind::UnsupportedGripper,
             "bundle was learned for gripper '" + b.gripper + "' but the gripper config is '" + g.name + "'");
    }
}

std::vector<Condition> parse_conditions(const std::string& list) {
    std::vector<Condition> out;
    std::size_t start = 0;
    while (start <= list.size()) {
        const auto end = list.find(',', start);
        const std::string tag = list.substr(start, end == std::string::npos ? std::string::npos : end - start);
        if (!tag.empty()) out.push_back(parse_condition(tag));
        if (end == std::string::npos) break;
        start = end + 1;
    }
    require(!out.empty(), "no conditions given");
    return out;
}

std::vector<QueryMethod> parse_methods(const std::string& list) {
    std::vector<QueryMethod> out;
    std::size_t start = 0;
    while (start <= list.size()) {
        const auto end = list.find(',', start);
        const std::string tag = list.substr(start, end == std::string::npos ? std::string::npos : end - start);
        if (!tag.empty()) out.push_back(parse_method(tag));
        if (end == std::string::npos) break;
        start = end + 1;
    }
    require(!out.empty(), "no methods given");
    return out;
}

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument:
        case ErrorKind::Io:
        case ErrorKind::UnsupportedGripper:
            return kExitValidation;
        default:
            return kExitRuntime;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Grasp synthesis from a single demonstration"};
    app.require_subcommand(1);

    // features
    Common features_common;
    std::string features_in, features_out;
    std::optional<double> features_radius;
    auto* features = app.add_subcommand("features", "estimate curvature frames of a point cloud");
    features->add_option("input", features_in, "input cloud (.ply or .apc)")->required();
    features->add_option("output", features_out, "output augmented cloud (.apc)")->required();
    features->add_option("--radius", features_radius, "neighborhood radius in meters");
    add_common(features, features_common);

    // learn
    Common learn_common;
    std::string learn_cloud, learn_snapshot, learn_out;
    auto* learn = app.add_subcommand("learn", "learn contact and hand-configuration models from a demonstration");
    learn->add_option("cloud", learn_cloud, "demonstration object (.apc)")->required();
    learn->add_option("snapshot", learn_snapshot, "hand snapshot JSON")->required();
    learn->add_option("output", learn_out, "model bundle JSON")->required();
    add_common(learn, learn_common);

    // synthesize
    Common synth_common;
    std::string synth_bundle, synth_cloud, synth_out, synth_method;
    std::vector<std::string> synth_experts;
    bool synth_no_default_experts = false;
    auto* synth = app.add_subcommand("synthesize", "generate and rank grasps on a query object");
    synth->add_option("bundle", synth_bundle, "model bundle JSON")->required();
    synth->add_option("cloud", synth_cloud, "query object (.apc)")->required();
    synth->add_option("output", synth_out, "ranked grasps JSON")->required();
    synth->add_option("--method", synth_method, "query density: gmm or kde");
    synth->add_option("--expert", synth_experts, "append an expert, e.g. axis:0,0,1:5.0 (repeatable)");
    synth->add_flag("--no-default-experts", synth_no_default_experts, "drop the configured expert list first");
    add_common(synth, synth_common);

    // noise
    std::string noise_in, noise_out;
    double noise_sigma_p = 1.0, noise_sigma_d = 0.001;
    std::optional<std::uint64_t> noise_seed;
    auto* noise = app.add_subcommand("noise", "apply the depth-sensor noise model to a depth image");
    noise->add_option("input", noise_in, "depth image")->required();
    noise->add_option("output", noise_out, "noisy depth image")->required();
    noise->add_option("--sigma-p", noise_sigma_p, "lateral shift std in pixels")->check(CLI::NonNegativeNumber);
    noise->add_option("--sigma-d", noise_sigma_d, "additive depth std in meters")->check(CLI::NonNegativeNumber);
    noise->add_option("--seed", noise_seed, "noise seed (falls back to GRASPSYNTH_SEED)");

    // make-objects
    std::string objects_manifest, objects_dir;
    std::optional<std::size_t> objects_count;
    std::uint64_t objects_seed = 7;
    bool objects_noise = false;
    auto* make_objects = app.add_subcommand("make-objects", "write surface and acquired clouds for a corpus");
    make_objects->add_option("manifest", objects_manifest, "object manifest JSON")->required();
    make_objects->add_option("output_dir", objects_dir, "output directory")->required();
    make_objects->add_option("--generate", objects_count, "write a fresh corpus of this size to the manifest first");
    make_objects->add_option("--corpus-seed", objects_seed, "generator seed for --generate");
    make_objects->add_flag("--noise", objects_noise, "acquire with depth noise");

    // make-demo
    std::string demo_dir;
    auto* make_demo = app.add_subcommand("make-demo", "write the synthetic box demonstration");
    make_demo->add_option("output_dir", demo_dir, "output directory")->required();

    // benchmark
    Common bench_common;
    std::string bench_bundle, bench_out, bench_manifest;
    std::vector<std::string> bench_clouds;
    auto* bench = app.add_subcommand("benchmark", "time the KDE and GMM arms on identical inputs");
    bench->add_option("bundle", bench_bundle, "model bundle JSON")->required();
    bench->add_option("output", bench_out, "timing CSV")->required();
    bench->add_option("--cloud", bench_clouds, "query object (.apc, repeatable)");
    bench->add_option("--manifest", bench_manifest, "object manifest JSON (acquired without noise)");
    add_common(bench, bench_common);

    // evaluate
    Common eval_common;
    std::string eval_bundle, eval_manifest, eval_dir, eval_conditions = "A,B,C,D", eval_methods = "gmm,kde";
    int eval_repeats = 10;
    auto* evaluate = app.add_subcommand("evaluate", "run the A-D campaign and paired t-tests");
    evaluate->add_option("bundle", eval_bundle, "model bundle JSON")->required();
    evaluate->add_option("manifest", eval_manifest, "object manifest JSON")->required();
    evaluate->add_option("output_dir", eval_dir, "output directory")->required();
    evaluate->add_option("--conditions", eval_conditions, "comma-separated subset of A,B,C,D");
    evaluate->add_option("--methods", eval_methods, "comma-separated methods; the t-test compares the first two");
    evaluate->add_option("--repeats", eval_repeats, "repeats per condition")->check(CLI::PositiveNumber);
    add_common(evaluate, eval_common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (*features) {
            const PipelineConfig cfg = resolve_config(features_common);
            const double radius = features_radius.value_or(cfg.curvature_radius);
            require(radius > 0.0, "--radius must be > 0");
            write_apc(features_out, estimate_frames(read_cloud(features_in), radius));
        } else if (*learn) {
            const PipelineConfig cfg = resolve_config(learn_common);
            const GripperModel g = load_gripper(learn_common);
            const AugmentedCloud cloud = read_apc(learn_cloud);
            const HandSnapshot snap = snapshot_from_json(read_json(learn_snapshot));
            if (snap.gripper != g.name) {
                fail(ErrorKind::UnsupportedGripper,
                     "snapshot gripper '" + snap.gripper + "' does not match '" + g.name + "'");
            }
            const LearnResult r = learn_from_demonstration(cloud, snap, g, cfg.learn_options());
            for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
            write_json(learn_out, bundle_to_json(r.bundle));
            std::cout << "bundle " << bundle_hash(r.bundle) << ": " << r.bundle.contacts.size() << " contact model(s)\n";
        } else if (*synth) {
            PipelineConfig cfg = resolve_config(synth_common);
            if (!synth_method.empty()) cfg.method = parse_method(synth_method);
            if (synth_no_default_experts) cfg.experts.clear();
            for (const auto& e : synth_experts) cfg.experts.push_back(parse_expert(e));
            const GripperModel g = load_gripper(synth_common);
            const ModelBundle bundle = bundle_from_json(read_json(synth_bundle));
            check_gripper(bundle, g);
            const AugmentedCloud cloud = read_apc(synth_cloud);
            const SynthesisResult r = synthesize(bundle, g, cloud, cfg.experts, cfg.synthesis_options());
            nlohmann::json experts = nlohmann::json::array();
            for (const auto& e : cfg.experts) experts.push_back(to_string(e));
            const nlohmann::json provenance = {{"seed", cfg.seed},
                                               {"bundle_hash", bundle_hash(bundle)},
                                               {"method", std::string(to_string(cfg.method))},
                                               {"experts", experts},
                                               {"candidates", cfg.candidates},
                                               {"top_m", cfg.top_m},
                                               {"optimize", cfg.optimize}};
            write_json(synth_out, grasps_to_json(r.ranked, provenance));
        } else if (*noise) {
            std::uint64_t seed = 0;
            if (noise_seed) {
                seed = *noise_seed;
            } else if (const char* env = std::getenv("GRASPSYNTH_SEED"); env && *env) {
                PipelineConfig tmp;
                tmp.set("seed", env);
                seed = tmp.seed;
            }
            write_depth(noise_out, apply_noise(read_depth(noise_in), noise_sigma_p, noise_sigma_d, seed));
        } else if (*make_objects) {
            std::vector<ObjectSpec> objects;
            if (objects_count) {
                require(*objects_count > 0, "--generate needs a positive count");
                objects = generate_corpus(*objects_count, objects_seed);
                write_json(objects_manifest, objects_to_json(objects));
            } else {
                objects = objects_from_json(read_json(objects_manifest));
            }
            fs::create_directories(objects_dir);
            for (std::size_t i = 0; i < objects.size(); ++i) {
                const auto& obj = objects[i];
                write_ply(fs::path(objects_dir) / (obj.id + ".ply"), object_surface(obj, derive_seed(objects_seed, "surface", i)));
                write_apc(fs::path(objects_dir) / (obj.id + ".apc"),
                          acquire_object(obj, objects_noise, derive_seed(objects_seed, "acquire", i)));
            }
            std::cout << objects.size() << " object(s) written to " << objects_dir << '\n';
        } else if (*make_demo) {
            const Demonstration demo = make_box_demo();
            fs::create_directories(demo_dir);
            write_apc(fs::path(demo_dir) / "demo.apc", demo.cloud);
            write_json(fs::path(demo_dir) / "snapshot.json", snapshot_to_json(demo.snapshot));
            write_json(fs::path(demo_dir) / "objects.json", objects_to_json({demo.object}));
            write_json(fs::path(demo_dir) / "gripper.json", gripper_to_json(default_gripper()));
        } else if (*bench) {
            const PipelineConfig cfg = resolve_config(bench_common);
            const GripperModel g = load_gripper(bench_common);
            const ModelBundle bundle = bundle_from_json(read_json(bench_bundle));
            check_gripper(bundle, g);
            BenchmarkOptions opts;
            opts.synthesis = cfg.synthesis_options();
            opts.experts = cfg.experts;
            std::vector<BenchmarkResult> results;
            for (const auto& path : bench_clouds) {
                results.push_back(run_benchmark(read_apc(path), bundle, g, opts, fs::path(path).stem().string()));
            }
            if (!bench_manifest.empty()) {
                for (const auto& obj : objects_from_json(read_json(bench_manifest))) {
                    results.push_back(run_benchmark(acquire_object(obj, false, 0, cfg.curvature_radius), bundle, g, opts, obj.id));
                }
            }
            require(!results.empty(), "benchmark needs --cloud or --manifest");
            write_text(bench_out, benchmark_csv(results));
        } else if (*evaluate) {
            const PipelineConfig cfg = resolve_config(eval_common);
            const GripperModel g = load_gripper(eval_common);
            const ModelBundle bundle = bundle_from_json(read_json(eval_bundle));
            check_gripper(bundle, g);
            CampaignOptions opts;
            opts.conditions = parse_conditions(eval_conditions);
            opts.methods = parse_methods(eval_methods);
            opts.repeats = eval_repeats;
            opts.seed = cfg.seed;
            opts.jobs = cfg.jobs;
            opts.synthesis = cfg.synthesis_options();
            opts.experts = cfg.experts;
            opts.curvature_radius = cfg.curvature_radius;
            opts.sigma_p = cfg.sigma_p;
            opts.sigma_d = cfg.sigma_d;
            const CampaignReport report = run_campaign(objects_from_json(read_json(eval_manifest)), bundle, g, opts);
            fs::create_directories(eval_dir);
            write_text(fs::path(eval_dir) / "trials.csv", campaign_csv(report));
            write_json(fs::path(eval_dir) / "summary.json", campaign_summary_json(report));
            const std::string text = campaign_text(report);
            write_text(fs::path(eval_dir) / "report.txt", text);
            std::cout << text;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
