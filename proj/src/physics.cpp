#include "qpn/physics.hpp"

#include <cmath>
#include <numbers>

#include "qpn/errors.hpp"

namespace qpn {

double MaterialConstants::coupling_k() const {
    const double local_field = (epsilon_dc + 2.0) * (epsilon_dc + 2.0) / (9.0 * epsilon_dc);
    return local_field / (4.0 * std::numbers::pi * constants::kVacuumPermittivity * constants::kPlanck);
}

double MaterialConstants::coupling_strength() const { return coupling_k() * delta_mu_cm * delta_mu_cm; }

void MaterialConstants::validate() const {
    if (!(delta_mu_cm > 0.0 && epsilon_dc > 0.0 && optical_t1_s > 0.0 && c_dd_nm6_per_s > 0.0)) {
        throw ConfigError("material constants must be strictly positive");
    }
}

void SpectralLineModel::validate() const {
    if (explicit_gamma_ghz && !(*explicit_gamma_ghz > 0.0)) throw ConfigError("explicit linewidth must be positive");
    if (!(gamma0_ghz > 0.0 && gamma_c_ghz >= 0.0)) {
        throw ConfigError("linewidth model needs gamma0 > 0 and gamma_c >= 0");
    }
}

void TuningRange::validate() const {
    if (!(half_width_ghz > 0.0)) throw ConfigError("tuning range must be positive");
}

double dipole_shift_hz(const Vec3& pos_a, const Vec3& dir_a, const Vec3& pos_b, const Vec3& dir_b,
                       const MaterialConstants& m) {
    const Vec3 r = pos_a - pos_b;
    const double dist2 = r.norm2();
    if (!(dist2 > 0.0)) throw SingularityError("dipole shift requested for coincident positions");
    const double dist = std::sqrt(dist2);
    const Vec3 rhat = r / dist;
    const double angular = dir_a.dot(dir_b) - 3.0 * (dir_a.dot(rhat) * dir_b.dot(rhat));
    const double dist_m = dist * 1e-9;
    return m.coupling_strength() * angular / (dist_m * dist_m * dist_m);
}

double dipole_shift_hz(const Dopant& a, const Dopant& b, const MaterialConstants& m) {
    return dipole_shift_hz(a.position, a.dipole_direction, b.position, b.dipole_direction, m);
}

double interaction_radius_nm(double min_shift_hz, const MaterialConstants& m) {
    return std::cbrt(2.0 * m.coupling_strength() / min_shift_hz) * 1e9;
}

double inhomogeneous_fwhm(const SpectralLineModel& model, double c_total) {
    if (model.explicit_gamma_ghz) return *model.explicit_gamma_ghz;
    return model.gamma0_ghz + model.gamma_c_ghz * c_total;
}

double lorentzian_quantile(double u, double fwhm_ghz, double center_ghz) {
    return center_ghz + 0.5 * fwhm_ghz * std::tan(std::numbers::pi * (u - 0.5));
}

double sample_frequency(Rng& rng, double fwhm_ghz, double center_ghz) {
    return lorentzian_quantile(uniform_open(rng), fwhm_ghz, center_ghz);
}

void assign_frequencies(CrystalRealization& crystal, double fwhm_ghz, double center_ghz, std::uint64_t seed) {
    Rng rng = make_rng(mix64(seed, 0x6672657175656e63ULL));
    for (auto& d : crystal.dopants) d.frequency_ghz = sample_frequency(rng, fwhm_ghz, center_ghz);
}

CrystalRealization apply_tuning_filter(const CrystalRealization& crystal, const TuningRange& range) {
    CrystalRealization out;
    out.sphere_radius_nm = crystal.sphere_radius_nm;
    out.seed = crystal.seed;
    for (const auto& d : crystal.dopants) {
        if (range.contains(d.frequency_ghz)) out.dopants.push_back(d);
    }
    return out;
}

double fret_rate(double distance_nm, const MaterialConstants& m) {
    if (!(distance_nm > 0.0)) throw SingularityError("FRET rate requested at zero distance");
    return m.c_dd_nm6_per_s / std::pow(distance_nm, 6);
}

double fret_critical_distance(const MaterialConstants& m) { return std::pow(m.c_dd_nm6_per_s * m.optical_t1_s, 1.0 / 6.0); }

}  // namespace qpn
