#include "qpn/spatial_index.hpp"

#include <algorithm>
#include <cmath>

#include "qpn/errors.hpp"

namespace qpn {

SpatialIndex::SpatialIndex(std::span<const Vec3> points, double cell_edge_nm)
    : points_(points.begin(), points.end()), edge_(cell_edge_nm) {
    if (!(cell_edge_nm > 0.0)) throw ConfigError("spatial index cell edge must be positive");
    if (points_.empty()) return;
    Vec3 lo = points_.front(), hi = points_.front();
    for (const auto& p : points_) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    origin_ = lo;
    const double ext[3] = {hi.x - lo.x, hi.y - lo.y, hi.z - lo.z};
    for (int d = 0; d < 3; ++d) dims_[d] = static_cast<std::int64_t>(std::floor(ext[d] / edge_)) + 1;

    const auto cells = static_cast<std::size_t>(dims_[0] * dims_[1] * dims_[2]);
    std::vector<std::uint32_t> cell_of(points_.size());
    starts_.assign(cells + 1, 0);
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i];
        const auto c = static_cast<std::size_t>((cell_coord(p.z, 2) * dims_[1] + cell_coord(p.y, 1)) * dims_[0] +
                                                cell_coord(p.x, 0));
        cell_of[i] = static_cast<std::uint32_t>(c);
        ++starts_[c + 1];
    }
    for (std::size_t c = 0; c < cells; ++c) starts_[c + 1] += starts_[c];
    order_.resize(points_.size());
    std::vector<std::uint32_t> fill(starts_.begin(), starts_.end() - 1);
    for (std::size_t i = 0; i < points_.size(); ++i) order_[fill[cell_of[i]]++] = static_cast<std::uint32_t>(i);
}

std::int64_t SpatialIndex::cell_coord(double v, int axis) const {
    const double o = axis == 0 ? origin_.x : (axis == 1 ? origin_.y : origin_.z);
    const auto c = static_cast<std::int64_t>(std::floor((v - o) / edge_));
    return std::clamp<std::int64_t>(c, 0, dims_[axis] - 1);
}

std::vector<std::uint32_t> SpatialIndex::neighbors_within(const Vec3& q, double radius) const {
    std::vector<std::uint32_t> out;
    if (points_.empty()) return out;
    const double r2 = radius * radius;
    const double qv[3] = {q.x, q.y, q.z};
    const double ov[3] = {origin_.x, origin_.y, origin_.z};
    std::int64_t lo[3], hi[3];
    for (int d = 0; d < 3; ++d) {
        lo[d] = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor((qv[d] - radius - ov[d]) / edge_)));
        hi[d] = std::min<std::int64_t>(dims_[d] - 1,
                                       static_cast<std::int64_t>(std::floor((qv[d] + radius - ov[d]) / edge_)));
        if (lo[d] > hi[d]) return out;
    }
    for (std::int64_t z = lo[2]; z <= hi[2]; ++z) {
        for (std::int64_t y = lo[1]; y <= hi[1]; ++y) {
            for (std::int64_t x = lo[0]; x <= hi[0]; ++x) {
                const auto c = static_cast<std::size_t>((z * dims_[1] + y) * dims_[0] + x);
                for (auto k = starts_[c]; k < starts_[c + 1]; ++k) {
                    const auto idx = order_[k];
                    if ((points_[idx] - q).norm2() <= r2) out.push_back(idx);
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

SpatialIndex build_index(const CrystalRealization& crystal, double r_max_nm) {
    if (!(r_max_nm > 0.0)) throw ConfigError("r_max must be positive");
    std::vector<Vec3> pts;
    pts.reserve(crystal.size());
    for (const auto& d : crystal.dopants) pts.push_back(d.position);
    return SpatialIndex(pts, r_max_nm);
}

}  // namespace qpn
