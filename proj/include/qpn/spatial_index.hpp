#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qpn/lattice.hpp"

namespace qpn {

/// Uniform bucket grid over the bounding box of a point set. Buckets are
/// stored contiguously (counting sort by cell, ascending point index within
/// a cell), so a query touches 27 short runs for radii up to the cell edge.
class SpatialIndex {
   public:
    SpatialIndex() = default;
    SpatialIndex(std::span<const Vec3> points, double cell_edge_nm);

    /// Indices of points with |p - q| <= radius, ascending.
    std::vector<std::uint32_t> neighbors_within(const Vec3& query, double radius_nm) const;

    double cell_edge() const { return edge_; }
    std::size_t point_count() const { return points_.size(); }
    std::size_t bucket_count() const { return starts_.empty() ? 0 : starts_.size() - 1; }
    /// Sum of bucket sizes; equals point_count() when every point is bucketed once.
    std::size_t bucketed_count() const { return order_.size(); }

   private:
    std::int64_t cell_coord(double v, int axis) const;

    std::vector<Vec3> points_;
    double edge_ = 1.0;
    Vec3 origin_;
    std::int64_t dims_[3] = {0, 0, 0};
    std::vector<std::uint32_t> starts_;
    std::vector<std::uint32_t> order_;
};

SpatialIndex build_index(const CrystalRealization& crystal, double r_max_nm);

}  // namespace qpn
