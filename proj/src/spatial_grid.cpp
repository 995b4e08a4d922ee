#include "graspsynth/spatial_grid.hpp"

#include <algorithm>
#include <cmath>

#include "graspsynth/error.hpp"

namespace graspsynth {

SpatialGrid::SpatialGrid(std::span<const Eigen::Vector3d> points, double cell_size)
    : cell_(cell_size), points_(points.begin(), points.end()) {
    if (!(cell_size > 0.0)) {
        fail(ErrorKind::InvalidArgument, "SpatialGrid: cell size must be positive");
    }
    std::vector<std::pair<std::uint64_t, std::uint32_t>> keyed;
    keyed.reserve(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto c = cell_of(points_[i]);
        keyed.emplace_back(pack(c[0], c[1], c[2]), static_cast<std::uint32_t>(i));
    }
    std::sort(keyed.begin(), keyed.end());
    order_.reserve(keyed.size());
    for (std::size_t k = 0; k < keyed.size();) {
        std::size_t e = k;
        while (e < keyed.size() && keyed[e].first == keyed[k].first) {
            order_.push_back(keyed[e].second);
            ++e;
        }
        const auto range = std::make_pair(static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(e));
        cells_.emplace(keyed[k].first, range);
        sorted_cells_.emplace_back(keyed[k].first, range);
        k = e;
    }
}

std::vector<std::size_t> SpatialGrid::within(const Eigen::Vector3d& center, double radius) const {
    std::vector<std::size_t> out;
    for_each_within(center, radius, [&](std::size_t i) { out.push_back(i); });
    std::sort(out.begin(), out.end());
    return out;
}

DenseGrid::DenseGrid(std::span<const Eigen::Vector3d> points, double cell_size) : cell_(cell_size) {
    if (!(cell_size > 0.0)) {
        fail(ErrorKind::InvalidArgument, "DenseGrid: cell size must be positive");
    }
    if (points.empty()) {
        start_.assign(2, 0);
        return;
    }
    lo_ = hi_ = points.front();
    for (const auto& p : points) {
        lo_ = lo_.cwiseMin(p);
        hi_ = hi_.cwiseMax(p);
    }
    // Widely spread clouds get coarser cells instead of an oversized array.
    constexpr double kMaxCells = 1 << 22;
    const Eigen::Vector3d extent = hi_ - lo_;
    auto count = [&] {
        double total = 1.0;
        for (int k = 0; k < 3; ++k) total *= std::floor(extent[k] / cell_) + 1.0;
        return total;
    };
    while (count() > kMaxCells) cell_ *= 2.0;
    for (int k = 0; k < 3; ++k) dims_[k] = static_cast<int>(std::floor(extent[k] / cell_) + 1.0);
    auto cell_of = [&](const Eigen::Vector3d& p) {
        std::size_t c = 0;
        for (int k = 0; k < 3; ++k) {
            const int i = std::min(dims_[k] - 1, static_cast<int>(std::floor((p[k] - lo_[k]) / cell_)));
            c = c * static_cast<std::size_t>(dims_[k]) + static_cast<std::size_t>(i);
        }
        return c;
    };
    const std::size_t n_cells =
        static_cast<std::size_t>(dims_[0]) * static_cast<std::size_t>(dims_[1]) * static_cast<std::size_t>(dims_[2]);
    start_.assign(n_cells + 1, 0);
    std::vector<std::size_t> cell(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        cell[i] = cell_of(points[i]);
        ++start_[cell[i] + 1];
    }
    for (std::size_t c = 0; c < n_cells; ++c) start_[c + 1] += start_[c];
    std::vector<std::uint32_t> fill(start_.begin(), start_.end() - 1);
    points_.resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) points_[fill[cell[i]]++] = points[i];
}

}  // namespace graspsynth
