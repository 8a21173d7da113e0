#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace qpn {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    bool contains(double v) const { return lo <= v && v < hi; }
    bool operator==(const Interval&) const = default;
};

/// A finite union of half-open intervals [lo, hi), kept sorted, disjoint and
/// free of empty pieces. Pieces closer than `eps` are merged during
/// canonicalization, so endpoint noise below that scale never produces
/// sliver gaps.
class IntervalSet {
   public:
    static constexpr double kDefaultEps = 1e-9;

    IntervalSet() = default;
    explicit IntervalSet(std::vector<Interval> pieces, double eps = kDefaultEps);

    static IntervalSet single(double lo, double hi) { return IntervalSet({{lo, hi}}); }

    std::span<const Interval> intervals() const { return pieces_; }
    std::size_t size() const { return pieces_.size(); }
    bool empty() const { return pieces_.empty(); }
    double measure() const;
    double eps() const { return eps_; }

    bool contains(double v) const;
    /// True if [lo, hi) intersects any piece with positive overlap.
    bool overlaps(double lo, double hi) const;

    IntervalSet united(const IntervalSet& other) const;
    IntervalSet intersected(const IntervalSet& other) const;
    /// Complement relative to the window [lo, hi).
    IntervalSet complement(double lo, double hi) const;
    IntervalSet translated(double delta) const;
    /// Minkowski sum with [-r, r]: every piece grows by r on both sides.
    IntervalSet dilated(double r) const;
    /// Point reflection v -> -v.
    IntervalSet reflected() const;

    /// In-place union with a single piece. Locates the affected range by
    /// binary search and rewrites only the pieces it touches.
    void insert(double lo, double hi);

    bool operator==(const IntervalSet& other) const { return pieces_ == other.pieces_; }

   private:
    void canonicalize();

    std::vector<Interval> pieces_;
    double eps_ = kDefaultEps;
};

}  // namespace qpn
