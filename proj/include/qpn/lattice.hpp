#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qpn/rng.hpp"
#include "qpn/vec3.hpp"

namespace qpn {

struct LatticeSite {
    Vec3 fractional;
    int site_id = 1;
};

/// Host crystal structure: three cell vectors (nm) and the yttrium positions
/// inside one cell, each tagged with its crystallographic site.
struct LatticeSpec {
    std::array<Vec3, 3> cell_vectors{};
    std::vector<LatticeSite> yttrium_sites;
    std::string name;

    double cell_volume() const;
    Vec3 to_cartesian(const Vec3& fractional) const;
    Vec3 to_fractional(const Vec3& cartesian) const;
    std::size_t sites_with_id(int site_id) const;
    /// Yttrium ions per nm^3.
    double yttrium_density() const;

    /// Throws InvalidLatticeError / ConfigError if an invariant is broken.
    void validate() const;
};

/// Direction set for the static dipole-moment difference. When `isotropic`
/// is set, directions are drawn uniformly on the unit sphere instead.
struct OrientationSet {
    bool isotropic = false;
    std::vector<Vec3> directions;

    static OrientationSet make_isotropic() { return {true, {}}; }
    void validate() const;
};

struct CrystalParams {
    double c_total = 0.01;
    double sphere_radius_nm = 100.0;
    /// Retained crystallographic site; 0 keeps every site and instead thins
    /// dopants with probability `site1_fraction`.
    int site_filter = 1;
    double site1_fraction = 0.5;
    std::uint64_t seed = 0;
    /// Refuse to build realizations whose expected dopant count exceeds this.
    double max_expected_dopants = 5.0e7;
    OrientationSet orientations = OrientationSet::make_isotropic();

    void validate() const;
};

struct Dopant {
    std::uint32_t id = 0;
    Vec3 position;          // nm, sphere centred at the origin
    Vec3 dipole_direction;  // unit vector along the dipole-moment difference
    double frequency_ghz = 0.0;  // detuning from the inhomogeneous line centre
    int site = 1;
};

/// One random doping of the host sphere. Dopant ids are dense and follow
/// generation order; filtered realizations keep the original ids.
struct CrystalRealization {
    std::vector<Dopant> dopants;
    double sphere_radius_nm = 0.0;
    std::uint64_t seed = 0;

    std::size_t size() const { return dopants.size(); }
    bool empty() const { return dopants.empty(); }
};

struct CellRange {
    std::int64_t i = 0;
    std::int64_t j = 0;
    std::int64_t k_min = 0;
    std::int64_t k_max = -1;  // inclusive; empty when k_max < k_min
};

/// Rows (fixed i, j) of unit cells whose axis-aligned bounding box meets the
/// cube [-r, r)^3 circumscribing the sphere. A zero radius selects the single
/// cell holding the origin.
std::vector<CellRange> enumerate_cell_rows(const LatticeSpec& spec, double radius_nm);

/// Number of unit cells covered by `enumerate_cell_rows`.
std::uint64_t enumerate_cells(const LatticeSpec& spec, double radius_nm);

Vec3 assign_dipole_direction(Rng& rng, const OrientationSet& orientations);

/// Expected number of retained dopants for the given parameters.
double expected_dopant_count(const LatticeSpec& spec, const CrystalParams& params);

/// Samples a realization: every yttrium position inside the sphere is
/// replaced independently with probability c_total. Occupancy is sampled
/// row by row with geometric gap skipping, so cost scales with the number of
/// dopants, not with the number of lattice positions. Each row has its own
/// RNG substream, which keeps the output identical for any `threads` value.
CrystalRealization build_crystal(const LatticeSpec& spec, const CrystalParams& params, unsigned threads = 1);

/// Reference Y2SiO5-like cell used when no lattice file is given.
LatticeSpec default_y2sio5_lattice();

}  // namespace qpn
