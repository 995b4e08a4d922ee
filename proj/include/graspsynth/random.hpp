#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace graspsynth {

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Stable 64-bit FNV-1a; used for seed derivation and content hashes.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL) noexcept;

// Sub-seed for a named purpose and an index (candidate number, object id, ...).
// Depends only on its arguments, so work can be scheduled in any order.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose, std::uint64_t index = 0) noexcept;

// Sequential random stream. Normals use Box-Muller on top of mt19937_64 so
// the stream is identical across standard library implementations.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform();
    double normal();
    // Uniform integer on [0, n).
    std::size_t index(std::size_t n);

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Counter-based normals: the k-th draw for a given (seed, counter) pair,
// independent of evaluation order.
double counter_normal(std::uint64_t seed, std::uint64_t counter, std::uint32_t k) noexcept;

}  // namespace graspsynth
