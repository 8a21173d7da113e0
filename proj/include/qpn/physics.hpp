#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>

#include "qpn/lattice.hpp"
#include "qpn/rng.hpp"

namespace qpn {

namespace constants {
// CODATA 2018 exact values
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m
inline constexpr double kPlanck = 6.62607015e-34;                // J s
}  // namespace constants

struct MaterialConstants {
    double delta_mu_cm = 7.6e-32;    // |dipole-moment difference|, C m
    double epsilon_dc = 11.0;        // static dielectric constant of the host
    double optical_t1_s = 1.9e-3;    // optical lifetime
    double c_dd_nm6_per_s = 0.43;    // FRET transfer microparameter

    /// Local-field corrected coupling (eps+2)^2/(9 eps) / (4 pi eps0 h), in Hz m^3 / (C m)^2.
    double coupling_k() const;
    /// k |delta_mu|^2 in Hz m^3.
    double coupling_strength() const;
    void validate() const;
};

struct SpectralLineModel {
    double gamma0_ghz = 1.8;
    double gamma_c_ghz = 1800.0;
    std::optional<double> explicit_gamma_ghz;
    double line_center_ghz = 0.0;

    void validate() const;
};

struct TuningRange {
    double half_width_ghz = std::numeric_limits<double>::infinity();
    double center_ghz = 0.0;

    static TuningRange total_width(double width_ghz, double center_ghz = 0.0) {
        return {width_ghz / 2.0, center_ghz};
    }
    bool contains(double nu_ghz) const { return std::abs(nu_ghz - center_ghz) <= half_width_ghz; }
    void validate() const;
};

/// Dipole-dipole shift of ion A's optical line when ion B is excited, in Hz.
/// The expression is symmetric in A and B.
double dipole_shift_hz(const Vec3& pos_a, const Vec3& dir_a, const Vec3& pos_b, const Vec3& dir_b,
                       const MaterialConstants& m);
double dipole_shift_hz(const Dopant& a, const Dopant& b, const MaterialConstants& m);

/// Distance beyond which no orientation can produce a shift of at least
/// `min_shift_hz` (the angular factor is bounded by 2).
double interaction_radius_nm(double min_shift_hz, const MaterialConstants& m);

/// Full width at half maximum of the inhomogeneous line, GHz.
double inhomogeneous_fwhm(const SpectralLineModel& model, double c_total);

/// Lorentzian inverse-CDF sample.
double sample_frequency(Rng& rng, double fwhm_ghz, double center_ghz);
double lorentzian_quantile(double u, double fwhm_ghz, double center_ghz);

/// Draws every dopant's detuning from a stream derived from `seed`, in id order.
void assign_frequencies(CrystalRealization& crystal, double fwhm_ghz, double center_ghz, std::uint64_t seed);

/// Keeps dopants whose detuning lies inside the laser tuning range.
CrystalRealization apply_tuning_filter(const CrystalRealization& crystal, const TuningRange& range);

/// Energy-transfer rate C_dd / r^6, 1/s.
double fret_rate(double distance_nm, const MaterialConstants& m);
/// Distance at which the transfer rate equals the radiative rate 1/T1, nm.
double fret_critical_distance(const MaterialConstants& m);

}  // namespace qpn
