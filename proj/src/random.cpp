#include "graspsynth/random.hpp"

#include <cmath>
#include <numbers>

#include "graspsynth/error.hpp"

namespace graspsynth {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "invalid-argument";
        case ErrorKind::InvalidState: return "invalid-state";
        case ErrorKind::EmptyResult: return "empty-result";
        case ErrorKind::EmptyDemonstration: return "empty-demonstration";
        case ErrorKind::NoAffinity: return "no-affinity";
        case ErrorKind::DegenerateVariance: return "degenerate-variance";
        case ErrorKind::UnsupportedGripper: return "unsupported-gripper";
        case ErrorKind::InvalidStart: return "invalid-start";
        case ErrorKind::Io: return "io";
    }
    return "unknown";
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis) noexcept {
    std::uint64_t h = basis;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose, std::uint64_t index) noexcept {
    std::uint64_t h = splitmix64(seed);
    h = fnv1a64(purpose, h);
    return splitmix64(h ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) {
        u1 = uniform();
    }
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

std::size_t Rng::index(std::size_t n) {
    if (n == 0) {
        fail(ErrorKind::InvalidArgument, "Rng::index: empty range");
    }
    // Rejection sampling removes modulo bias.
    const std::uint64_t limit = max() - (max() % n);
    std::uint64_t v = engine_();
    while (v >= limit) {
        v = engine_();
    }
    return static_cast<std::size_t>(v % n);
}

double counter_normal(std::uint64_t seed, std::uint64_t counter, std::uint32_t k) noexcept {
    const std::uint32_t pair = k / 2;
    const std::uint64_t base = splitmix64(seed ^ splitmix64(counter * 0x9e3779b97f4a7c15ULL + pair));
    const std::uint64_t a = splitmix64(base + 1);
    const std::uint64_t b = splitmix64(base + 2);
    const double u1 = (static_cast<double>(a >> 11) + 0.5) * 0x1.0p-53;
    const double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return (k % 2 == 0) ? radius * std::cos(angle) : radius * std::sin(angle);
}

}  // namespace graspsynth
