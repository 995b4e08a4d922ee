#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace graspsynth {

// Uniform hash grid over a fixed point set. Range queries visit points in
// ascending input-index order within each cell, and cells in a fixed
// order, so results do not depend on hashing details.
class SpatialGrid {
public:
    SpatialGrid(std::span<const Eigen::Vector3d> points, double cell_size);

    double cell_size() const { return cell_; }
    const std::vector<Eigen::Vector3d>& points() const { return points_; }

    // f(index) for every point inside the axis-aligned box [lo, hi].
    template <class F>
    void for_each_in_box(const Eigen::Vector3d& lo, const Eigen::Vector3d& hi, F&& f) const {
        const auto a = cell_of(lo);
        const auto b = cell_of(hi);
        const double span_cells = static_cast<double>(b[0] - a[0] + 1) * static_cast<double>(b[1] - a[1] + 1) *
                                  static_cast<double>(b[2] - a[2] + 1);
        auto emit_cell = [&](std::uint32_t begin, std::uint32_t end) {
            for (std::uint32_t k = begin; k < end; ++k) {
                const std::uint32_t i = order_[k];
                const Eigen::Vector3d& p = points_[i];
                if ((p.array() >= lo.array()).all() && (p.array() <= hi.array()).all()) {
                    f(static_cast<std::size_t>(i));
                }
            }
        };
        if (span_cells > static_cast<double>(cells_.size())) {
            for (const auto& [key, range] : sorted_cells_) {
                emit_cell(range.first, range.second);
            }
            return;
        }
        for (std::int64_t x = a[0]; x <= b[0]; ++x) {
            for (std::int64_t y = a[1]; y <= b[1]; ++y) {
                for (std::int64_t z = a[2]; z <= b[2]; ++z) {
                    auto it = cells_.find(pack(x, y, z));
                    if (it != cells_.end()) {
                        emit_cell(it->second.first, it->second.second);
                    }
                }
            }
        }
    }

    // f(index) for every point within `radius` of `center` (inclusive).
    template <class F>
    void for_each_within(const Eigen::Vector3d& center, double radius, F&& f) const {
        const double r2 = radius * radius;
        const Eigen::Vector3d ext = Eigen::Vector3d::Constant(radius);
        for_each_in_box(center - ext, center + ext, [&](std::size_t i) {
            if ((points_[i] - center).squaredNorm() <= r2) {
                f(i);
            }
        });
    }

    std::vector<std::size_t> within(const Eigen::Vector3d& center, double radius) const;

private:
    std::array<std::int64_t, 3> cell_of(const Eigen::Vector3d& p) const {
        return {static_cast<std::int64_t>(std::floor(p.x() / cell_)), static_cast<std::int64_t>(std::floor(p.y() / cell_)),
                static_cast<std::int64_t>(std::floor(p.z() / cell_))};
    }
    static std::uint64_t pack(std::int64_t x, std::int64_t y, std::int64_t z) {
        constexpr std::int64_t bias = 1 << 20;
        constexpr std::uint64_t mask = (1ULL << 21) - 1;
        return ((static_cast<std::uint64_t>(x + bias) & mask) << 42) |
               ((static_cast<std::uint64_t>(y + bias) & mask) << 21) | (static_cast<std::uint64_t>(z + bias) & mask);
    }

    double cell_;
    std::vector<Eigen::Vector3d> points_;
    std::vector<std::uint32_t> order_;
    std::unordered_map<std::uint64_t, std::pair<std::uint32_t, std::uint32_t>> cells_;
    std::vector<std::pair<std::uint64_t, std::pair<std::uint32_t, std::uint32_t>>> sorted_cells_;
};

// Dense cell array over the bounding box of a fixed point set, with points
// stored contiguously per cell (ascending input index). Suited to repeated
// box queries that can reject whole cells.
class DenseGrid {
public:
    DenseGrid(std::span<const Eigen::Vector3d> points, double cell_size);

    double cell_size() const { return cell_; }
    // Lower and upper corners of the point bounding box.
    const Eigen::Vector3d& lower() const { return lo_; }
    const Eigen::Vector3d& upper() const { return hi_; }

    // For each cell overlapping [lo, hi] with keep(cell_center) true, calls
    // f(point) for each point in the cell.
    template <class Keep, class F>
    void for_each_cell_in_box(const Eigen::Vector3d& lo, const Eigen::Vector3d& hi, Keep&& keep, F&& f) const {
        if (points_.empty()) return;
        std::array<int, 3> a{}, b{};
        for (int k = 0; k < 3; ++k) {
            a[k] = std::max(0, static_cast<int>(std::floor((lo[k] - lo_[k]) / cell_)));
            b[k] = std::min(dims_[k] - 1, static_cast<int>(std::floor((hi[k] - lo_[k]) / cell_)));
            if (a[k] > b[k]) return;
        }
        for (int x = a[0]; x <= b[0]; ++x) {
            for (int y = a[1]; y <= b[1]; ++y) {
                for (int z = a[2]; z <= b[2]; ++z) {
                    const std::size_t c = (static_cast<std::size_t>(x) * static_cast<std::size_t>(dims_[1]) +
                                           static_cast<std::size_t>(y)) *
                                              static_cast<std::size_t>(dims_[2]) +
                                          static_cast<std::size_t>(z);
                    const std::uint32_t begin = start_[c], end = start_[c + 1];
                    if (begin == end) continue;
                    const Eigen::Vector3d center = lo_ + cell_ * Eigen::Vector3d(x + 0.5, y + 0.5, z + 0.5);
                    if (!keep(center)) continue;
                    for (std::uint32_t k = begin; k < end; ++k) f(points_[k]);
                }
            }
        }
    }

    // As above for the oriented box {center + axes * l : |l_k| <= half_k},
    // visiting only cells whose center lies inside it; f receives the span
    // of the cell's points.
    template <class Keep, class F>
    void for_each_cell_in_oriented_box(const Eigen::Vector3d& center, const Eigen::Matrix3d& axes,
                                       const Eigen::Vector3d& half, Keep&& keep, F&& f) const {
        if (points_.empty()) return;
        const Eigen::Vector3d ext = axes.cwiseAbs() * half;
        std::array<int, 3> a{}, b{};
        for (int k = 0; k < 2; ++k) {
            a[k] = first_center_at_or_above(center[k] - ext[k], k);
            b[k] = last_center_at_or_below(center[k] + ext[k], k);
            if (a[k] > b[k]) return;
        }
        // Local coordinates along a z column: l(t) = l0 + t * dir.
        const Eigen::Vector3d dir = axes.row(2).transpose();
        const double inf = std::numeric_limits<double>::infinity();
        for (int x = a[0]; x <= b[0]; ++x) {
            for (int y = a[1]; y <= b[1]; ++y) {
                const Eigen::Vector3d base(lo_[0] + cell_ * (x + 0.5) - center[0], lo_[1] + cell_ * (y + 0.5) - center[1],
                                           -center[2]);
                const Eigen::Vector3d l0 = axes.transpose() * base;
                double t0 = -inf, t1 = inf;
                for (int k = 0; k < 3; ++k) {
                    if (std::abs(dir[k]) < 1e-12) {
                        if (std::abs(l0[k]) > half[k]) t1 = -inf;
                        continue;
                    }
                    double u = (-half[k] - l0[k]) / dir[k], v = (half[k] - l0[k]) / dir[k];
                    if (u > v) std::swap(u, v);
                    t0 = std::max(t0, u);
                    t1 = std::min(t1, v);
                }
                if (!(t0 <= t1)) continue;
                const int z0 = first_center_at_or_above(t0, 2);
                const int z1 = last_center_at_or_below(t1, 2);
                const std::size_t row = (static_cast<std::size_t>(x) * static_cast<std::size_t>(dims_[1]) +
                                         static_cast<std::size_t>(y)) *
                                        static_cast<std::size_t>(dims_[2]);
                for (int z = z0; z <= z1; ++z) {
                    const std::size_t c = row + static_cast<std::size_t>(z);
                    const std::uint32_t begin = start_[c], end = start_[c + 1];
                    if (begin == end) continue;
                    const Eigen::Vector3d cc = lo_ + cell_ * Eigen::Vector3d(x + 0.5, y + 0.5, z + 0.5);
                    if (!keep(cc)) continue;
                    f(std::span<const Eigen::Vector3d>(points_.data() + begin, end - begin));
                }
            }
        }
    }

private:
    // Index range of cells along axis k whose centers are >= v (<= v),
    // clamped to the grid; NaN yields an empty range.
    int first_center_at_or_above(double v, int k) const {
        const double i = std::ceil((v - lo_[k]) / cell_ - 0.5);
        return i >= 0.0 ? (i < dims_[k] ? static_cast<int>(i) : dims_[k]) : (i < 0.0 ? 0 : dims_[k]);
    }
    int last_center_at_or_below(double v, int k) const {
        const double i = std::floor((v - lo_[k]) / cell_ - 0.5);
        return i < dims_[k] ? (i >= 0.0 ? static_cast<int>(i) : -1) : (i >= dims_[k] ? dims_[k] - 1 : -1);
    }

    double cell_;
    Eigen::Vector3d lo_ = Eigen::Vector3d::Zero();
    Eigen::Vector3d hi_ = Eigen::Vector3d::Zero();
    std::array<int, 3> dims_{1, 1, 1};
    std::vector<std::uint32_t> start_;
    std::vector<Eigen::Vector3d> points_;
};

}  // namespace graspsynth
