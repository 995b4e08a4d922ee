#include "graspsynth/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <type_traits>

#include "graspsynth/error.hpp"
#include "graspsynth/io.hpp"

namespace graspsynth {
namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
    fail(ErrorKind::InvalidArgument,
         "config key '" + std::string(key) + "': expected " + std::string(expected) + ", got '" + std::string(value) + "'");
}

double to_double(std::string_view key, std::string_view value) {
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
    if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(x)) bad_value(key, value, "a number");
    return x;
}

std::uint64_t to_u64(std::string_view key, std::string_view value) {
    std::uint64_t x = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
    if (ec != std::errc() || ptr != value.data() + value.size()) bad_value(key, value, "a nonnegative integer");
    return x;
}

bool to_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    bad_value(key, value, "true or false");
}

std::vector<ExpertSpec> to_experts(std::string_view value) {
    std::vector<ExpertSpec> out;
    std::size_t start = 0;
    while (start <= value.size()) {
        const auto end = value.find(';', start);
        const auto item = trim(value.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
        if (!item.empty()) out.push_back(parse_expert(item));
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return out;
}

using Setter = std::function<void(PipelineConfig&, std::string_view, std::string_view)>;
using Getter = std::function<std::string(const PipelineConfig&)>;

struct Field {
    Setter set;
    Getter get;
};

template <class T>
Field number_field(T PipelineConfig::*member) {
    return {[member](PipelineConfig& c, std::string_view k, std::string_view v) {
                if constexpr (std::is_floating_point_v<T>) {
                    c.*member = to_double(k, v);
                } else {
                    const std::uint64_t x = to_u64(k, v);
                    if (x > static_cast<std::uint64_t>(std::numeric_limits<T>::max())) bad_value(k, v, "a smaller integer");
                    c.*member = static_cast<T>(x);
                }
            },
            [member](const PipelineConfig& c) {
                if constexpr (std::is_floating_point_v<T>) {
                    return format_double(c.*member);
                } else {
                    return std::to_string(c.*member);
                }
            }};
}

const std::map<std::string, Field, std::less<>>& fields() {
    static const std::map<std::string, Field, std::less<>> table = [] {
        std::map<std::string, Field, std::less<>> t;
        t["curvature_radius"] = number_field(&PipelineConfig::curvature_radius);
        t["contact_delta"] = number_field(&PipelineConfig::contact_delta);
        t["contact_components"] = number_field(&PipelineConfig::contact_components);
        t["method"] = {[](PipelineConfig& c, std::string_view, std::string_view v) { c.method = parse_method(v); },
                       [](const PipelineConfig& c) { return std::string(to_string(c.method)); }};
        t["query_components"] = number_field(&PipelineConfig::query_components);
        t["query_samples"] = number_field(&PipelineConfig::query_samples);
        t["kde_position_bandwidth"] = number_field(&PipelineConfig::kde_position_bandwidth);
        t["kde_rotation_bandwidth"] = number_field(&PipelineConfig::kde_rotation_bandwidth);
        t["em_max_iter"] = number_field(&PipelineConfig::em_max_iter);
        t["em_tol"] = number_field(&PipelineConfig::em_tol);
        t["em_cov_floor"] = number_field(&PipelineConfig::em_cov_floor);
        t["hand_alpha"] = number_field(&PipelineConfig::hand_alpha);
        t["hand_beta"] = number_field(&PipelineConfig::hand_beta);
        t["hand_samples"] = number_field(&PipelineConfig::hand_samples);
        t["candidates"] = number_field(&PipelineConfig::candidates);
        t["top_m"] = number_field(&PipelineConfig::top_m);
        t["optimize"] = {[](PipelineConfig& c, std::string_view k, std::string_view v) { c.optimize = to_bool(k, v); },
                         [](const PipelineConfig& c) { return std::string(c.optimize ? "true" : "false"); }};
        t["anneal_iters"] = number_field(&PipelineConfig::anneal_iters);
        t["anneal_t0"] = number_field(&PipelineConfig::anneal_t0);
        t["step_position"] = number_field(&PipelineConfig::step_position);
        t["step_rotation"] = number_field(&PipelineConfig::step_rotation);
        t["step_joint_fraction"] = number_field(&PipelineConfig::step_joint_fraction);
        t["sigma_p"] = number_field(&PipelineConfig::sigma_p);
        t["sigma_d"] = number_field(&PipelineConfig::sigma_d);
        t["experts"] = {[](PipelineConfig& c, std::string_view, std::string_view v) { c.experts = to_experts(v); },
                        [](const PipelineConfig& c) {
                            std::string s;
                            for (const auto& e : c.experts) {
                                if (!s.empty()) s += "; ";
                                s += to_string(e);
                            }
                            return s;
                        }};
        t["seed"] = number_field(&PipelineConfig::seed);
        t["jobs"] = number_field(&PipelineConfig::jobs);
        return t;
    }();
    return table;
}

void check(bool ok, std::string_view key, std::string_view what) {
    if (!ok) fail(ErrorKind::InvalidArgument, "config key '" + std::string(key) + "': " + std::string(what));
}

}  // namespace

void PipelineConfig::set(std::string_view key, std::string_view value) {
    const auto it = fields().find(key);
    if (it == fields().end()) fail(ErrorKind::InvalidArgument, "unknown config key '" + std::string(key) + "'");
    it->second.set(*this, key, trim(value));
}

void PipelineConfig::validate() const {
    check(curvature_radius > 0.0, "curvature_radius", "must be > 0");
    check(contact_delta > 0.0, "contact_delta", "must be > 0");
    check(contact_components >= 1, "contact_components", "must be >= 1");
    check(query_components >= 1, "query_components", "must be >= 1");
    check(query_samples >= query_components, "query_samples", "must be >= query_components");
    check(kde_position_bandwidth > 0.0, "kde_position_bandwidth", "must be > 0");
    check(kde_rotation_bandwidth > 0.0, "kde_rotation_bandwidth", "must be > 0");
    check(em_max_iter >= 1, "em_max_iter", "must be >= 1");
    check(em_tol > 0.0, "em_tol", "must be > 0");
    check(em_cov_floor >= 0.0, "em_cov_floor", "must be >= 0");
    check(hand_alpha >= 0.0, "hand_alpha", "must be >= 0");
    check(hand_beta > 0.0, "hand_beta", "must be > 0");
    check(hand_samples >= 2, "hand_samples", "must be >= 2");
    check(candidates >= 1, "candidates", "must be >= 1");
    check(anneal_iters >= 0, "anneal_iters", "must be >= 0");
    check(anneal_t0 >= 0.0, "anneal_t0", "must be >= 0");
    check(step_position >= 0.0, "step_position", "must be >= 0");
    check(step_rotation >= 0.0, "step_rotation", "must be >= 0");
    check(step_joint_fraction >= 0.0, "step_joint_fraction", "must be >= 0");
    check(sigma_p >= 0.0, "sigma_p", "must be >= 0");
    check(sigma_d >= 0.0, "sigma_d", "must be >= 0");
    check(jobs >= 1, "jobs", "must be >= 1");
}

LearnOptions PipelineConfig::learn_options() const {
    LearnOptions o;
    o.delta = contact_delta;
    o.components = contact_components;
    o.seed = seed;
    o.hand.alpha = hand_alpha;
    o.hand.beta = hand_beta;
    o.hand.n_samples = hand_samples;
    return o;
}

SynthesisOptions PipelineConfig::synthesis_options() const {
    SynthesisOptions o;
    o.query.method = method;
    o.query.n_samples = query_samples;
    o.query.components = query_components;
    o.query.kde_position_bandwidth = kde_position_bandwidth;
    o.query.kde_rotation_bandwidth = kde_rotation_bandwidth;
    o.query.em_max_iter = em_max_iter;
    o.query.em_tol = em_tol;
    o.query.em_cov_floor = em_cov_floor;
    o.n_candidates = candidates;
    o.top_m = top_m;
    o.optimize = optimize;
    o.anneal.iters = anneal_iters;
    o.anneal.t0 = anneal_t0;
    o.anneal.step_position = step_position;
    o.anneal.step_rotation = step_rotation;
    o.anneal.step_joint_fraction = step_joint_fraction;
    o.seed = seed;
    o.jobs = jobs;
    return o;
}

std::vector<std::string> config_keys() {
    std::vector<std::string> keys;
    for (const auto& [k, f] : fields()) keys.push_back(k);
    return keys;
}

PipelineConfig parse_config(std::string_view text) {
    PipelineConfig c;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            fail(ErrorKind::InvalidArgument, "config line " + std::to_string(line_no) + ": expected key = value");
        }
        c.set(trim(line.substr(0, eq)), line.substr(eq + 1));
    }
    c.validate();
    return c;
}

PipelineConfig load_config(const std::filesystem::path& path) { return parse_config(read_text(path)); }

std::string config_to_text(const PipelineConfig& c) {
    std::ostringstream out;
    for (const auto& [k, f] : fields()) out << k << " = " << f.get(c) << '\n';
    return out.str();
}

}  // namespace graspsynth
