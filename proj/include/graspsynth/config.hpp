#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "graspsynth/contact.hpp"
#include "graspsynth/eval.hpp"
#include "graspsynth/synth.hpp"

namespace graspsynth {

/// Every pipeline tunable. The text form is one `key = value` per line;
/// '#' starts a comment. `experts` holds expert specs separated by ';'.
struct PipelineConfig {
    double curvature_radius = kDefaultCurvatureRadius;
    double contact_delta = kDefaultContactDelta;
    std::size_t contact_components = kDefaultContactComponents;

    QueryMethod method = QueryMethod::Gmm;
    std::size_t query_components = 5;
    std::size_t query_samples = 500;
    double kde_position_bandwidth = 0.01;
    double kde_rotation_bandwidth = 0.1;
    int em_max_iter = 200;
    double em_tol = 1e-6;
    double em_cov_floor = 1e-8;

    double hand_alpha = 10.0;
    double hand_beta = 0.5;
    int hand_samples = 21;

    std::size_t candidates = 200;
    std::size_t top_m = 10;
    bool optimize = true;
    int anneal_iters = 100;
    double anneal_t0 = 1.0;
    double step_position = 0.005;
    double step_rotation = 0.05;
    double step_joint_fraction = 0.02;

    double sigma_p = 1.0;
    double sigma_d = 0.001;

    std::vector<ExpertSpec> experts = default_experts();
    std::uint64_t seed = 0;
    unsigned jobs = 1;

    // Throws InvalidArgument naming the key for unknown keys or bad values.
    void set(std::string_view key, std::string_view value);
    void validate() const;

    LearnOptions learn_options() const;
    SynthesisOptions synthesis_options() const;
};

std::vector<std::string> config_keys();

PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::filesystem::path& path);
// Round-trips through parse_config.
std::string config_to_text(const PipelineConfig& c);

}  // namespace graspsynth
