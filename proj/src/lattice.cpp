#include "qpn/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "qpn/errors.hpp"

namespace qpn {

namespace {

constexpr double kVolumeFloor = 1e-12;  // nm^3

struct Reciprocal {
    std::array<Vec3, 3> rows;
};

Reciprocal reciprocal_of(const LatticeSpec& spec) {
    const auto& [a, b, c] = spec.cell_vectors;
    const double vol = a.dot(b.cross(c));
    return {{b.cross(c) / vol, c.cross(a) / vol, a.cross(b) / vol}};
}

// Smallest integer strictly greater than x / largest strictly below x.
std::int64_t int_above(double x) { return static_cast<std::int64_t>(std::floor(x)) + 1; }
std::int64_t int_below(double x) { return static_cast<std::int64_t>(std::ceil(x)) - 1; }

}  // namespace

double LatticeSpec::cell_volume() const {
    const auto& [a, b, c] = cell_vectors;
    return std::abs(a.dot(b.cross(c)));
}

Vec3 LatticeSpec::to_cartesian(const Vec3& f) const {
    return cell_vectors[0] * f.x + cell_vectors[1] * f.y + cell_vectors[2] * f.z;
}

Vec3 LatticeSpec::to_fractional(const Vec3& p) const {
    const auto rec = reciprocal_of(*this);
    return {rec.rows[0].dot(p), rec.rows[1].dot(p), rec.rows[2].dot(p)};
}

std::size_t LatticeSpec::sites_with_id(int site_id) const {
    return static_cast<std::size_t>(std::count_if(yttrium_sites.begin(), yttrium_sites.end(),
                                                  [&](const LatticeSite& s) { return s.site_id == site_id; }));
}

double LatticeSpec::yttrium_density() const { return static_cast<double>(yttrium_sites.size()) / cell_volume(); }

void LatticeSpec::validate() const {
    if (!(cell_volume() > kVolumeFloor)) {
        throw InvalidLatticeError("lattice '" + name + "': cell vectors are degenerate (volume " +
                                  std::to_string(cell_volume()) + " nm^3)");
    }
    if (yttrium_sites.empty()) throw ConfigError("lattice '" + name + "': no yttrium positions");
    for (const auto& s : yttrium_sites) {
        for (double f : {s.fractional.x, s.fractional.y, s.fractional.z}) {
            if (!(f >= 0.0 && f < 1.0)) {
                throw ConfigError("lattice '" + name + "': fractional coordinate " + std::to_string(f) +
                                  " outside [0, 1)");
            }
        }
        if (s.site_id != 1 && s.site_id != 2) {
            throw ConfigError("lattice '" + name + "': site id must be 1 or 2, got " + std::to_string(s.site_id));
        }
    }
    if (sites_with_id(1) == 0 || sites_with_id(2) == 0) {
        throw ConfigError("lattice '" + name + "': each site id needs at least one position");
    }
}

void OrientationSet::validate() const {
    if (isotropic) return;
    if (directions.empty()) throw ConfigError("orientation set is empty");
    for (const auto& d : directions) {
        if (std::abs(d.norm() - 1.0) > 1e-9) throw ConfigError("orientation vectors must be unit length");
    }
}

void CrystalParams::validate() const {
    if (!(c_total >= 0.0 && c_total <= 1.0)) {
        throw ConfigError("concentration must lie in [0, 1], got " + std::to_string(c_total));
    }
    if (!(sphere_radius_nm > 0.0)) throw ConfigError("sphere radius must be positive");
    if (!(site1_fraction >= 0.0 && site1_fraction <= 1.0)) throw ConfigError("site1_fraction must lie in [0, 1]");
    if (site_filter < 0 || site_filter > 2) throw ConfigError("site_filter must be 0, 1 or 2");
    orientations.validate();
}

std::vector<CellRange> enumerate_cell_rows(const LatticeSpec& spec, double radius_nm) {
    if (!(spec.cell_volume() > kVolumeFloor)) throw InvalidLatticeError("degenerate lattice cell");
    if (radius_nm < 0.0) throw ConfigError("radius must be non-negative");
    if (radius_nm == 0.0) return {CellRange{0, 0, 0, 0}};

    const auto& [A, B, C] = spec.cell_vectors;
    // axis-aligned bounds of the unit cell relative to its origin corner
    Vec3 lo{}, hi{};
    for (int corner = 0; corner < 8; ++corner) {
        const Vec3 p = A * (corner & 1) + B * ((corner >> 1) & 1) + C * ((corner >> 2) & 1);
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    const double r = radius_nm;
    // a cell with origin o qualifies iff -r - hi_d < o_d < r - lo_d on every axis
    const Vec3 omin{-r - hi.x, -r - hi.y, -r - hi.z};
    const Vec3 omax{r - lo.x, r - lo.y, r - lo.z};

    const auto rec = reciprocal_of(spec);
    double fmin[3], fmax[3];
    for (int d = 0; d < 3; ++d) {
        fmin[d] = std::numeric_limits<double>::infinity();
        fmax[d] = -fmin[d];
    }
    for (int corner = 0; corner < 8; ++corner) {
        const Vec3 p{(corner & 1) ? omax.x : omin.x, ((corner >> 1) & 1) ? omax.y : omin.y,
                     ((corner >> 2) & 1) ? omax.z : omin.z};
        for (int d = 0; d < 3; ++d) {
            const double f = rec.rows[d].dot(p);
            fmin[d] = std::min(fmin[d], f);
            fmax[d] = std::max(fmax[d], f);
        }
    }

    const double olo[3] = {omin.x, omin.y, omin.z};
    const double ohi[3] = {omax.x, omax.y, omax.z};
    const double cvec[3] = {C.x, C.y, C.z};

    std::vector<CellRange> rows;
    for (auto i = static_cast<std::int64_t>(std::floor(fmin[0])); i <= static_cast<std::int64_t>(std::ceil(fmax[0]));
         ++i) {
        for (auto j = static_cast<std::int64_t>(std::floor(fmin[1]));
             j <= static_cast<std::int64_t>(std::ceil(fmax[1])); ++j) {
            const Vec3 base = A * static_cast<double>(i) + B * static_cast<double>(j);
            const double b[3] = {base.x, base.y, base.z};
            std::int64_t kmin = static_cast<std::int64_t>(std::floor(fmin[2])) - 1;
            std::int64_t kmax = static_cast<std::int64_t>(std::ceil(fmax[2])) + 1;
            for (int d = 0; d < 3 && kmin <= kmax; ++d) {
                if (cvec[d] == 0.0) {
                    if (!(b[d] > olo[d] && b[d] < ohi[d])) kmax = kmin - 1;
                    continue;
                }
                const double t1 = (olo[d] - b[d]) / cvec[d];
                const double t2 = (ohi[d] - b[d]) / cvec[d];
                // strict bounds on k from the open interval (olo, ohi)
                kmin = std::max(kmin, int_above(std::min(t1, t2)));
                kmax = std::min(kmax, int_below(std::max(t1, t2)));
            }
            if (kmin <= kmax) rows.push_back({i, j, kmin, kmax});
        }
    }
    return rows;
}

std::uint64_t enumerate_cells(const LatticeSpec& spec, double radius_nm) {
    std::uint64_t total = 0;
    for (const auto& row : enumerate_cell_rows(spec, radius_nm)) total += static_cast<std::uint64_t>(row.k_max - row.k_min + 1);
    return total;
}

Vec3 assign_dipole_direction(Rng& rng, const OrientationSet& orientations) {
    if (orientations.isotropic) {
        const double z = 2.0 * uniform_open(rng) - 1.0;
        const double phi = 2.0 * std::numbers::pi * uniform_open(rng);
        const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        return {s * std::cos(phi), s * std::sin(phi), z};
    }
    if (orientations.directions.empty()) throw ConfigError("orientation set is empty");
    return orientations.directions[uniform_index(rng, orientations.directions.size())];
}

double expected_dopant_count(const LatticeSpec& spec, const CrystalParams& params) {
    const double sites = params.site_filter == 0 ? static_cast<double>(spec.yttrium_sites.size())
                                                 : static_cast<double>(spec.sites_with_id(params.site_filter));
    const double keep = params.site_filter == 0 ? params.site1_fraction : 1.0;
    const double sphere = 4.0 / 3.0 * std::numbers::pi * std::pow(params.sphere_radius_nm, 3);
    return sites / spec.cell_volume() * sphere * params.c_total * keep;
}

namespace {

void sample_row(const LatticeSpec& spec, std::span<const LatticeSite> sites, const CellRange& row,
                const CrystalParams& params, std::vector<Dopant>& out) {
    const double c = params.c_total;
    if (c <= 0.0 || sites.empty()) return;
    const auto per_cell = static_cast<std::uint64_t>(sites.size());
    const std::uint64_t length = static_cast<std::uint64_t>(row.k_max - row.k_min + 1) * per_cell;
    const double r2 = params.sphere_radius_nm * params.sphere_radius_nm;
    const double log_miss = std::log1p(-c);

    Rng rng = make_rng(mix64(params.seed, static_cast<std::uint64_t>(row.i), static_cast<std::uint64_t>(row.j)));
    const Vec3 row_origin = spec.to_cartesian({static_cast<double>(row.i), static_cast<double>(row.j), 0.0});

    std::uint64_t t = 0;
    while (t < length) {
        if (c < 1.0) {
            // number of unoccupied positions before the next dopant
            const double gap = std::floor(std::log(uniform_open(rng)) / log_miss);
            if (gap >= static_cast<double>(length - t)) break;
            t += static_cast<std::uint64_t>(gap);
        }
        const auto k = row.k_min + static_cast<std::int64_t>(t / per_cell);
        const auto& site = sites[t % per_cell];
        ++t;
        const Vec3 pos = row_origin + spec.to_cartesian(site.fractional + Vec3{0.0, 0.0, static_cast<double>(k)});
        if (pos.norm2() > r2) continue;
        if (params.site_filter == 0 && uniform_open(rng) >= params.site1_fraction) continue;
        Dopant d;
        d.position = pos;
        d.site = site.site_id;
        d.dipole_direction = assign_dipole_direction(rng, params.orientations);
        out.push_back(d);
    }
}

}  // namespace

CrystalRealization build_crystal(const LatticeSpec& spec, const CrystalParams& params, unsigned threads) {
    spec.validate();
    params.validate();
    const double expected = expected_dopant_count(spec, params);
    if (expected > params.max_expected_dopants) {
        throw CapacityError("expected " + std::to_string(static_cast<long long>(expected)) +
                                " dopants exceeds the budget of " +
                                std::to_string(static_cast<long long>(params.max_expected_dopants)),
                            expected);
    }

    std::vector<LatticeSite> sites;
    for (const auto& s : spec.yttrium_sites) {
        if (params.site_filter == 0 || s.site_id == params.site_filter) sites.push_back(s);
    }

    // superset margin so positions exactly on the sphere surface are not lost to the half-open cube
    const auto rows = enumerate_cell_rows(spec, params.sphere_radius_nm * (1.0 + 1e-12) + 1e-12);
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(rows.size())));
    std::vector<std::vector<Dopant>> chunks(threads);
    {
        std::vector<std::jthread> workers;
        for (unsigned w = 0; w < threads; ++w) {
            workers.emplace_back([&, w] {
                const std::size_t begin = rows.size() * w / threads;
                const std::size_t end = rows.size() * (w + 1) / threads;
                auto& out = chunks[w];
                out.reserve(static_cast<std::size_t>(expected / threads * 1.05) + 16);
                for (std::size_t r = begin; r < end; ++r) sample_row(spec, sites, rows[r], params, out);
            });
        }
    }

    CrystalRealization crystal;
    crystal.sphere_radius_nm = params.sphere_radius_nm;
    crystal.seed = params.seed;
    std::size_t total = 0;
    for (const auto& ch : chunks) total += ch.size();
    crystal.dopants.reserve(total);
    for (auto& ch : chunks) {
        for (auto& d : ch) {
            d.id = static_cast<std::uint32_t>(crystal.dopants.size());
            crystal.dopants.push_back(d);
        }
    }
    return crystal;
}

LatticeSpec default_y2sio5_lattice() {
    // Y2SiO5 (X2 phase), space group C2/c: a = 1.4371 nm, b = 0.6710 nm,
    // c = 1.0388 nm, beta = 122.17 deg; a along x, b along y, c in the xz plane.
    // Two 8f yttrium orbits, expanded with the C2/c general positions.
    const double a = 1.4371, b = 0.6710, c = 1.0388;
    const double beta = 122.17 * std::numbers::pi / 180.0;
    LatticeSpec spec;
    spec.name = "Y2SiO5 C2/c";
    spec.cell_vectors = {Vec3{a, 0.0, 0.0}, Vec3{0.0, b, 0.0}, Vec3{c * std::cos(beta), 0.0, c * std::sin(beta)}};
    const std::array<std::pair<Vec3, int>, 2> orbits = {{{{0.03598, 0.2566, 0.4665}, 1}, {{0.3590, 0.1225, 0.1669}, 2}}};
    const auto wrap = [](double v) { return v - std::floor(v); };
    for (const auto& [p, site] : orbits) {
        const std::array<Vec3, 4> images = {Vec3{p.x, p.y, p.z}, Vec3{-p.x, p.y, 0.5 - p.z}, Vec3{-p.x, -p.y, -p.z},
                                            Vec3{p.x, -p.y, 0.5 + p.z}};
        for (const Vec3& centering : {Vec3{0.0, 0.0, 0.0}, Vec3{0.5, 0.5, 0.0}}) {
            for (const auto& img : images) {
                const Vec3 f = img + centering;
                spec.yttrium_sites.push_back({{wrap(f.x), wrap(f.y), wrap(f.z)}, site});
            }
        }
    }
    return spec;
}

}  // namespace qpn
