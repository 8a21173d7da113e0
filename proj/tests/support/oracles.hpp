#pragma once

// Brute-force reference implementations used by the unit and acceptance
// tests. Nothing here calls into the code path it is compared against.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "qpn/lattice.hpp"
#include "qpn/spectral.hpp"

namespace oracle {

// CODATA 2018, repeated here so the coupling constant is checked end to end.
inline constexpr double kEps0 = 8.8541878128e-12;
inline constexpr double kPlanck = 6.62607015e-34;

inline double coupling_hz_m3(double delta_mu_cm, double epsilon) {
    const double local_field = (epsilon + 2.0) * (epsilon + 2.0) / (9.0 * epsilon);
    return local_field / (4.0 * std::numbers::pi * kEps0 * kPlanck) * delta_mu_cm * delta_mu_cm;
}

// Dipole shift with explicit components, r pointing from b to a.
inline double dipole_shift_hz(const std::array<double, 3>& pa, const std::array<double, 3>& ua,
                              const std::array<double, 3>& pb, const std::array<double, 3>& ub, double k_hz_m3) {
    double r[3], d2 = 0;
    for (int i = 0; i < 3; ++i) {
        r[i] = (pa[i] - pb[i]) * 1e-9;
        d2 += r[i] * r[i];
    }
    const double d = std::sqrt(d2);
    double ab = 0, ar = 0, br = 0;
    for (int i = 0; i < 3; ++i) {
        ab += ua[i] * ub[i];
        ar += ua[i] * r[i] / d;
        br += ub[i] * r[i] / d;
    }
    return k_hz_m3 / (d2 * d) * (ab - 3.0 * ar * br);
}

inline std::vector<std::uint32_t> neighbors_brute(const std::vector<qpn::Vec3>& pts, const qpn::Vec3& q, double r) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < pts.size(); ++i) {
        const double dx = pts[i].x - q.x, dy = pts[i].y - q.y, dz = pts[i].z - q.z;
        if (dx * dx + dy * dy + dz * dz <= r * r) out.push_back(i);
    }
    return out;
}

// Every lattice position inside the sphere, by scanning a generous box of
// cells without any bounding-box pruning.
inline std::vector<qpn::Vec3> lattice_positions_in_sphere(const qpn::LatticeSpec& spec, double radius, int site) {
    std::vector<qpn::Vec3> out;
    const int n = static_cast<int>(std::ceil(radius / 0.3)) + 3;
    for (int i = -n; i <= n; ++i)
        for (int j = -n; j <= n; ++j)
            for (int k = -n; k <= n; ++k)
                for (const auto& s : spec.yttrium_sites) {
                    if (site != 0 && s.site_id != site) continue;
                    const qpn::Vec3 f{s.fractional.x + i, s.fractional.y + j, s.fractional.z + k};
                    const qpn::Vec3 p = spec.cell_vectors[0] * f.x + spec.cell_vectors[1] * f.y + spec.cell_vectors[2] * f.z;
                    if (p.norm() <= radius) out.push_back(p);
                }
    return out;
}

// Reserved-frequency test for a second qubit at offset x (MHz) from the
// first: forbidden if a single spectator ion has one transition inside a
// control region of one qubit and a transition from a different ground state
// inside a control region of the other.
inline bool reserved_by_scan(double x_mhz, const qpn::LevelStructure& lv, const qpn::ControlRegionSpec& ctrl) {
    for (const auto& m : ctrl.regions) {
        const double cm = lv.transition_mhz(m.ground, m.excited);
        for (const auto& n : ctrl.regions) {
            const double cn = x_mhz + lv.transition_mhz(n.ground, n.excited);
            for (int s = 0; s < 3; ++s)
                for (int j = 0; j < 3; ++j)
                    for (int s2 = 0; s2 < 3; ++s2) {
                        if (s2 == s) continue;
                        for (int j2 = 0; j2 < 3; ++j2) {
                            // spectator base frequencies reaching each region
                            const double lo1 = cm - m.width_mhz / 2 - lv.transition_mhz(s, j);
                            const double hi1 = cm + m.width_mhz / 2 - lv.transition_mhz(s, j);
                            const double lo2 = cn - n.width_mhz / 2 - lv.transition_mhz(s2, j2);
                            const double hi2 = cn + n.width_mhz / 2 - lv.transition_mhz(s2, j2);
                            if (std::max(lo1, lo2) < std::min(hi1, hi2)) return true;
                        }
                    }
        }
    }
    return false;
}

// A shift is unusable if it moves some other |0>/|1> transition into the
// band of a gate pulse, or if it is too small to run a gate.
inline bool shift_forbidden_by_scan(double shift_mhz, const qpn::LevelStructure& lv, double imin, double bw) {
    if (std::abs(shift_mhz) < imin) return true;
    for (int pg : {0, 1}) {
        const double pulse = lv.transition_mhz(pg, 0);
        for (int g : {0, 1})
            for (int e = 0; e < 3; ++e) {
                const double t = lv.transition_mhz(g, e);
                if (t == pulse) continue;
                // The pulse sees (pulse - t) as the shift that lands t on it.
                if (std::abs(shift_mhz - (pulse - t)) < bw / 2) return true;
            }
    }
    return false;
}

}  // namespace oracle
