#include <doctest.h>

#include "oracles.hpp"
#include "qpn/errors.hpp"
#include "qpn/spatial_index.hpp"

using namespace qpn;

TEST_CASE("trivial indices") {
    const std::vector<Vec3> one{{1, 2, 3}};
    const SpatialIndex idx(one, 5.0);
    CHECK(idx.neighbors_within({1, 2, 3}, 5.0) == std::vector<std::uint32_t>{0});
    CHECK(idx.neighbors_within({20, 2, 3}, 5.0).empty());

    const SpatialIndex empty(std::span<const Vec3>{}, 5.0);
    CHECK(empty.neighbors_within({0, 0, 0}, 5.0).empty());

    CHECK_THROWS_AS(SpatialIndex(one, 0.0), ConfigError);
}

TEST_CASE("a lone dopant has no neighbours") {
    CrystalRealization c;
    c.dopants.push_back(Dopant{});
    const auto idx = build_index(c, 13.9);
    const auto hits = idx.neighbors_within(c.dopants[0].position, 13.9);
    REQUIRE(hits.size() == 1);  // itself
    CHECK(hits[0] == 0);
}

TEST_CASE("radius queries match brute force") {
    CrystalParams p;
    p.c_total = 0.01;
    p.sphere_radius_nm = 15.0;
    p.site_filter = 0;
    p.site1_fraction = 1.0;
    p.seed = 8;
    const auto crystal = build_crystal(default_y2sio5_lattice(), p);
    std::vector<Vec3> pts;
    for (const auto& d : crystal.dopants) pts.push_back(d.position);
    REQUIRE(pts.size() > 500);

    const double r_max = 13.88;
    const auto idx = build_index(crystal, r_max);
    CHECK(idx.bucketed_count() == pts.size());
    CHECK(idx.cell_edge() >= r_max);

    Rng rng = make_rng(99);
    for (int q = 0; q < 100; ++q) {
        const Vec3 query{(uniform_open(rng) - 0.5) * 36, (uniform_open(rng) - 0.5) * 36, (uniform_open(rng) - 0.5) * 36};
        for (double r : {r_max, 5.0, 0.7}) {
            CHECK(idx.neighbors_within(query, r) == oracle::neighbors_brute(pts, query, r));
        }
    }
    // queries centred on dopants, as the protocols issue them
    for (std::size_t i = 0; i < pts.size(); i += 7) {
        CHECK(idx.neighbors_within(pts[i], r_max) == oracle::neighbors_brute(pts, pts[i], r_max));
    }
}
