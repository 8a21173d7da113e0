#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <tuple>

#include "oracles.hpp"
#include "qpn/errors.hpp"
#include "qpn/lattice.hpp"

using namespace qpn;

namespace {

LatticeSpec cubic(double edge) {
    LatticeSpec s;
    s.name = "cubic";
    s.cell_vectors = {Vec3{edge, 0, 0}, Vec3{0, edge, 0}, Vec3{0, 0, edge}};
    s.yttrium_sites = {{{0.0, 0.0, 0.0}, 1}, {{0.5, 0.5, 0.5}, 2}};
    return s;
}

// Counts cells whose corner-box meets [-r, r)^3 by testing every cell of a
// wide index window.
std::uint64_t cells_by_scan(const LatticeSpec& spec, double r, int window) {
    std::uint64_t n = 0;
    for (int i = -window; i <= window; ++i)
        for (int j = -window; j <= window; ++j)
            for (int k = -window; k <= window; ++k) {
                double lo[3] = {1e300, 1e300, 1e300}, hi[3] = {-1e300, -1e300, -1e300};
                for (int c = 0; c < 8; ++c) {
                    const Vec3 p = spec.to_cartesian({double(i + (c & 1)), double(j + ((c >> 1) & 1)), double(k + ((c >> 2) & 1))});
                    const double v[3] = {p.x, p.y, p.z};
                    for (int d = 0; d < 3; ++d) {
                        lo[d] = std::min(lo[d], v[d]);
                        hi[d] = std::max(hi[d], v[d]);
                    }
                }
                bool meets = true;
                for (int d = 0; d < 3; ++d) meets = meets && hi[d] > -r && lo[d] < r;
                n += meets;
            }
    return n;
}

CrystalParams params(double c, double radius, std::uint64_t seed) {
    CrystalParams p;
    p.c_total = c;
    p.sphere_radius_nm = radius;
    p.seed = seed;
    return p;
}

double min_pair_distance(const std::vector<Vec3>& pts) {
    double best = 1e300;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::min(best, (pts[i] - pts[j]).norm());
    return best;
}

}  // namespace

TEST_CASE("default cell carries the expected yttrium content") {
    const auto spec = default_y2sio5_lattice();
    CHECK_NOTHROW(spec.validate());
    CHECK(spec.yttrium_sites.size() == 16);
    CHECK(spec.sites_with_id(1) == 8);
    CHECK(spec.sites_with_id(2) == 8);
    // a b c sin(beta)
    const double vol = 1.4371 * 0.6710 * 1.0388 * std::sin(122.17 * std::numbers::pi / 180);
    CHECK(spec.cell_volume() == doctest::Approx(vol).epsilon(1e-12));
    CHECK(spec.yttrium_density() == doctest::Approx(18.87).epsilon(0.005));
    const Vec3 f{0.2, 0.7, 0.4};
    const Vec3 back = spec.to_fractional(spec.to_cartesian(f));
    CHECK((back - f).norm() < 1e-12);
}

TEST_CASE("lattice validation") {
    auto spec = cubic(1.0);
    spec.cell_vectors[2] = spec.cell_vectors[0] * 2.0;
    CHECK_THROWS_AS(spec.validate(), InvalidLatticeError);
    CHECK_THROWS_AS(enumerate_cells(spec, 5.0), InvalidLatticeError);

    spec = cubic(1.0);
    spec.yttrium_sites[0].fractional.x = 1.0;
    CHECK_THROWS_AS(spec.validate(), ConfigError);

    spec = cubic(1.0);
    spec.yttrium_sites[1].site_id = 1;
    CHECK_THROWS_AS(spec.validate(), ConfigError);
}

TEST_CASE("cell enumeration") {
    CHECK(enumerate_cells(default_y2sio5_lattice(), 0.0) == 1);
    CHECK(enumerate_cells(cubic(1.0), 0.0) == 1);
    CHECK(enumerate_cells(cubic(1.0), 2.0) == 64);
    CHECK(cells_by_scan(cubic(1.0), 2.0, 6) == 64);

    const auto spec = default_y2sio5_lattice();
    for (double r : {0.4, 1.0, 2.5, 4.0}) {
        CAPTURE(r);
        CHECK(enumerate_cells(spec, r) == cells_by_scan(spec, r, 14));
    }

    // (2r)^3 / V plus a boundary shell
    const double bulk = std::pow(200.0, 3) / spec.cell_volume();
    const auto n = static_cast<double>(enumerate_cells(spec, 100.0));
    CHECK(bulk == doctest::Approx(9.4e6).epsilon(0.01));
    CHECK(n > bulk);
    CHECK(n < bulk * 1.05);
}

TEST_CASE("every sampled position is a lattice position of the retained site") {
    const auto spec = default_y2sio5_lattice();
    for (int site : {1, 2}) {
        auto p = params(1.0, 3.0, 5);
        p.site_filter = site;
        const auto crystal = build_crystal(spec, p);
        auto expected = oracle::lattice_positions_in_sphere(spec, 3.0, site);
        REQUIRE(crystal.size() == expected.size());
        // nearest oracle position; each one may be claimed once
        std::vector<bool> used(expected.size(), false);
        for (const auto& d : crystal.dopants) {
            std::size_t best = 0;
            for (std::size_t i = 1; i < expected.size(); ++i)
                if ((expected[i] - d.position).norm2() < (expected[best] - d.position).norm2()) best = i;
            CHECK((expected[best] - d.position).norm() < 1e-9);
            CHECK_FALSE(used[best]);
            used[best] = true;
            CHECK(d.site == site);
        }
    }
}

TEST_CASE("minimum dopant separation follows the lattice") {
    const auto spec = default_y2sio5_lattice();
    auto p = params(1.0, 2.5, 1);
    const auto site1 = build_crystal(spec, p);
    std::vector<Vec3> pts;
    for (const auto& d : site1.dopants) pts.push_back(d.position);
    const double d1 = min_pair_distance(pts);
    CHECK(d1 == doctest::Approx(min_pair_distance(oracle::lattice_positions_in_sphere(spec, 2.5, 1))));
    CHECK(d1 >= 0.35);

    p.site_filter = 0;
    p.site1_fraction = 1.0;
    const auto all = build_crystal(spec, p);
    pts.clear();
    for (const auto& d : all.dopants) pts.push_back(d.position);
    CHECK(min_pair_distance(pts) == doctest::Approx(min_pair_distance(oracle::lattice_positions_in_sphere(spec, 2.5, 0))));
    CHECK(min_pair_distance(pts) > 0.33);
}

TEST_CASE("zero concentration gives an empty crystal") {
    CHECK(build_crystal(default_y2sio5_lattice(), params(0.0, 20.0, 3)).empty());
}

TEST_CASE("realizations are reproducible and independent of thread count") {
    const auto spec = default_y2sio5_lattice();
    const auto p = params(0.02, 12.0, 99);
    const auto a = build_crystal(spec, p, 1);
    const auto b = build_crystal(spec, p, 1);
    const auto c = build_crystal(spec, p, 4);
    REQUIRE(a.size() == b.size());
    REQUIRE(a.size() == c.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.dopants[i].id == i);
        CHECK(a.dopants[i].position == b.dopants[i].position);
        CHECK(a.dopants[i].position == c.dopants[i].position);
        CHECK(a.dopants[i].dipole_direction == c.dopants[i].dipole_direction);
    }
    const auto other = build_crystal(spec, params(0.02, 12.0, 100));
    CHECK((other.size() != a.size() || other.dopants[0].position != a.dopants[0].position));
}

TEST_CASE("dopant geometry invariants") {
    auto p = params(0.05, 15.0, 4);
    p.orientations = OrientationSet::make_isotropic();
    const auto crystal = build_crystal(default_y2sio5_lattice(), p);
    REQUIRE(!crystal.empty());
    for (const auto& d : crystal.dopants) {
        CHECK(d.position.norm() <= 15.0);
        CHECK(std::abs(d.dipole_direction.norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("dopant counts follow the binomial law") {
    const auto spec = default_y2sio5_lattice();
    const double radius = 8.0, c = 0.01;
    const double n_sites = static_cast<double>(oracle::lattice_positions_in_sphere(spec, radius, 1).size());
    const int seeds = 300;
    double sum = 0;
    for (int s = 0; s < seeds; ++s) sum += static_cast<double>(build_crystal(spec, params(c, radius, 1000 + s)).size());
    const double mean = sum / seeds;
    const double sigma_of_mean = std::sqrt(n_sites * c * (1 - c) / seeds);
    CHECK(std::abs(mean - n_sites * c) < 3 * sigma_of_mean);
}

TEST_CASE("full-size realization at one percent") {
    const auto spec = default_y2sio5_lattice();
    const auto crystal = build_crystal(spec, params(0.01, 100.0, 2024));
    // site-1 positions: half the yttrium density times the sphere volume
    const double n_y = spec.yttrium_density() * 4.0 / 3.0 * std::numbers::pi * 1e6;
    CHECK(n_y == doctest::Approx(7.9e7).epsilon(0.01));
    const double mean = n_y / 2 * 0.01;
    const double sigma = std::sqrt(n_y / 2 * 0.01 * 0.99);
    CHECK(std::abs(static_cast<double>(crystal.size()) - mean) < 3 * sigma);
    CHECK(crystal.size() == doctest::Approx(3.9e5).epsilon(0.02));
}

TEST_CASE("capacity budget") {
    auto p = params(0.05, 100.0, 1);
    p.max_expected_dopants = 1e5;
    try {
        build_crystal(default_y2sio5_lattice(), p);
        FAIL("expected a capacity error");
    } catch (const CapacityError& e) {
        CHECK(e.expected_dopants() == doctest::Approx(expected_dopant_count(default_y2sio5_lattice(), p)));
        CHECK(e.expected_dopants() > 1e6);
    }
}

TEST_CASE("crystal parameter validation") {
    const auto spec = default_y2sio5_lattice();
    CHECK_THROWS_AS(build_crystal(spec, params(1.5, 10.0, 1)), ConfigError);
    CHECK_THROWS_AS(build_crystal(spec, params(-0.1, 10.0, 1)), ConfigError);
    CHECK_THROWS_AS(build_crystal(spec, params(0.01, 0.0, 1)), ConfigError);
    auto p = params(0.01, 10.0, 1);
    p.site1_fraction = 2.0;
    CHECK_THROWS_AS(build_crystal(spec, p), ConfigError);
}

TEST_CASE("dipole direction assignment") {
    Rng rng = make_rng(1);
    OrientationSet single{false, {Vec3{0, 0, 1}}};
    for (int i = 0; i < 100; ++i) CHECK(assign_dipole_direction(rng, single) == Vec3{0, 0, 1});

    CHECK_THROWS_AS(assign_dipole_direction(rng, OrientationSet{false, {}}), ConfigError);

    const int draws = 100000;
    Vec3 sum{};
    const auto iso = OrientationSet::make_isotropic();
    for (int i = 0; i < draws; ++i) sum = sum + assign_dipole_direction(rng, iso);
    CHECK((sum / draws).norm() < 0.02);

    const double a = 0.5, c = std::sqrt(0.5);
    OrientationSet four{false, {Vec3{a, a, c}, Vec3{-a, a, -c}, Vec3{-a, -a, -c}, Vec3{a, -a, c}}};
    int hits[4] = {0, 0, 0, 0};
    for (int i = 0; i < draws; ++i) {
        const Vec3 v = assign_dipole_direction(rng, four);
        for (int k = 0; k < 4; ++k) hits[k] += (v == four.directions[k]);
    }
    for (int k = 0; k < 4; ++k) CHECK(hits[k] / double(draws) == doctest::Approx(0.25).epsilon(0.04));
}
