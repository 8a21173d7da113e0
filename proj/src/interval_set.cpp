#include "qpn/interval_set.hpp"

#include <algorithm>
#include <iterator>

namespace qpn {

IntervalSet::IntervalSet(std::vector<Interval> pieces, double eps) : pieces_(std::move(pieces)), eps_(eps) {
    canonicalize();
}

void IntervalSet::canonicalize() {
    std::erase_if(pieces_, [](const Interval& iv) { return !(iv.hi > iv.lo); });
    std::sort(pieces_.begin(), pieces_.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> merged;
    merged.reserve(pieces_.size());
    for (const auto& iv : pieces_) {
        if (!merged.empty() && iv.lo <= merged.back().hi + eps_) {
            merged.back().hi = std::max(merged.back().hi, iv.hi);
        } else {
            merged.push_back(iv);
        }
    }
    pieces_ = std::move(merged);
}

double IntervalSet::measure() const {
    double total = 0.0;
    for (const auto& iv : pieces_) total += iv.length();
    return total;
}

bool IntervalSet::contains(double v) const {
    // first piece with lo > v; the candidate is the one before it
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), v,
                               [](double value, const Interval& iv) { return value < iv.lo; });
    if (it == pieces_.begin()) return false;
    return std::prev(it)->contains(v);
}

bool IntervalSet::overlaps(double lo, double hi) const {
    if (!(hi > lo)) return false;
    auto it = std::lower_bound(pieces_.begin(), pieces_.end(), lo,
                               [](const Interval& iv, double value) { return iv.hi <= value; });
    return it != pieces_.end() && it->lo < hi;
}

IntervalSet IntervalSet::united(const IntervalSet& other) const {
    std::vector<Interval> all;
    all.reserve(pieces_.size() + other.pieces_.size());
    all.insert(all.end(), pieces_.begin(), pieces_.end());
    all.insert(all.end(), other.pieces_.begin(), other.pieces_.end());
    return IntervalSet(std::move(all), std::max(eps_, other.eps_));
}

IntervalSet IntervalSet::intersected(const IntervalSet& other) const {
    std::vector<Interval> out;
    std::size_t i = 0, j = 0;
    while (i < pieces_.size() && j < other.pieces_.size()) {
        const auto& a = pieces_[i];
        const auto& b = other.pieces_[j];
        const double lo = std::max(a.lo, b.lo);
        const double hi = std::min(a.hi, b.hi);
        if (hi > lo) out.push_back({lo, hi});
        if (a.hi < b.hi) {
            ++i;
        } else {
            ++j;
        }
    }
    return IntervalSet(std::move(out), std::max(eps_, other.eps_));
}

IntervalSet IntervalSet::complement(double lo, double hi) const {
    std::vector<Interval> out;
    double cursor = lo;
    for (const auto& iv : pieces_) {
        if (iv.hi <= lo) continue;
        if (iv.lo >= hi) break;
        if (iv.lo > cursor) out.push_back({cursor, iv.lo});
        cursor = std::max(cursor, iv.hi);
    }
    if (cursor < hi) out.push_back({cursor, hi});
    return IntervalSet(std::move(out), eps_);
}

IntervalSet IntervalSet::translated(double delta) const {
    IntervalSet out = *this;
    for (auto& iv : out.pieces_) {
        iv.lo += delta;
        iv.hi += delta;
    }
    return out;
}

IntervalSet IntervalSet::dilated(double r) const {
    std::vector<Interval> grown;
    grown.reserve(pieces_.size());
    for (const auto& iv : pieces_) grown.push_back({iv.lo - r, iv.hi + r});
    return IntervalSet(std::move(grown), eps_);
}

IntervalSet IntervalSet::reflected() const {
    // (-hi, -lo] is stored as [-hi, -lo); the endpoint itself is below eps resolution
    std::vector<Interval> out;
    out.reserve(pieces_.size());
    for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) out.push_back({-it->hi, -it->lo});
    return IntervalSet(std::move(out), eps_);
}

void IntervalSet::insert(double lo, double hi) {
    if (!(hi > lo)) return;
    // every piece with hi + eps >= lo and lo <= hi + eps merges with the new one
    auto first = std::lower_bound(pieces_.begin(), pieces_.end(), lo,
                                  [this](const Interval& iv, double value) { return iv.hi + eps_ < value; });
    auto last = first;
    while (last != pieces_.end() && last->lo <= hi + eps_) {
        lo = std::min(lo, last->lo);
        hi = std::max(hi, last->hi);
        ++last;
    }
    if (first == last) {
        pieces_.insert(first, {lo, hi});
        return;
    }
    *first = {lo, hi};
    pieces_.erase(std::next(first), last);
}

}  // namespace qpn
