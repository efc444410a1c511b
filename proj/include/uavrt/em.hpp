// SPDX-License-Identifier: Apache-2.0
//
// uavrt - deterministic ray-tracing simulator for UAV air-to-ground mmWave channels
// Copyright 2026 the uavrt contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef UAVRT_EM_HPP
#define UAVRT_EM_HPP

#include <complex>
#include <utility>

namespace uavrt
{

    inline constexpr double speed_of_light = 299792458.0; // m/s

    // Carrier description. Derived quantities are fixed at construction:
    // wavelength = c / f and wavenumber k = 2*pi / wavelength.
    struct WaveContext
    {
        double frequency_mhz = 0.0;
        double wavelength_m = 0.0;
        double wavenumber = 0.0;

        explicit WaveContext(double f_mhz); // throws std::invalid_argument unless f > 0
    };

    // Free-space path loss in dB: 32.44 + 20 log10(f/MHz) + 20 log10(d/km).
    // Positive, larger = weaker. Throws for non-positive distance.
    double fspl_db(const WaveContext &ctx, double distance_m);

    // Complex field of the direct ray at a receiver `distance_m` away from
    // the source, normalized to a unit reference field at 1 m:
    // exp(-j k d) / d. Throws for non-positive distance.
    std::complex<double> los_field(const WaveContext &ctx, double distance_m);

    enum class Polarization
    {
        parallel,      // E in the plane of incidence
        perpendicular, // E normal to the plane of incidence
    };

    // Fresnel reflection coefficient of a dielectric half-space with real
    // relative permittivity eps_r > 1. theta_from_normal in [0, pi/2).
    //   parallel:      (eps cos t - sqrt(eps - sin^2 t)) / (eps cos t + sqrt(eps - sin^2 t))
    //   perpendicular: (cos t - sqrt(eps - sin^2 t)) / (cos t + sqrt(eps - sin^2 t))
    // Both tend to -1 at grazing; the parallel one crosses zero at the
    // polarizing angle arctan(sqrt(eps_r)).
    double reflection_coefficient(double epsilon_r, double theta_from_normal, Polarization pol);

    // Field of a singly reflected ray: e0 * r * exp(-j k D) / D with
    // D = dist_rx_s + dist_s_tx the unfolded path length and e0 the unit
    // reference field at 1 m. Throws unless both legs are positive.
    std::complex<double> reflected_field(std::complex<double> e0, double r,
                                         double dist_rx_s, double dist_s_tx, const WaveContext &ctx);

    // Transition function F(x) = 2 j sqrt(x) e^{jx} Integral_{sqrt(x)}^inf e^{-j tau^2} d tau
    // for x >= 0. |F| grows monotonically from 0 to 1. Below x = 1e-8 the
    // leading-order series is used so tiny arguments do not cancel.
    std::complex<double> transition_function(double x);

    // Geometry and face coefficients feeding one wedge diffraction.
    // Angles follow the wedge frame: phi_incidence is the exterior angle of
    // the direction from the diffraction point toward the source,
    // phi_observation the one toward the receiver, both in [0, n*pi].
    struct WedgeDiffractionInput
    {
        double dist_rx_s = 0.0;      // receiver to diffraction point, m
        double dist_s_tx = 0.0;      // diffraction point to source, m
        double n_factor = 2.0;       // exterior angle / pi, in (1, 2]
        double phi_incidence = 0.0;  // radians
        double phi_observation = 0.0;// radians
        double r0 = -1.0;            // reflection coefficient of the zero face
        double rn = -1.0;            // reflection coefficient of the n face
    };

    // Four-term wedge diffraction coefficient
    //   I = I1 + I2 + r0 I3 + rn I4,
    //   Ii = -e^{-j pi/4} / (2 n sqrt(2 pi k)) * cot(g_i) * F(2 k L n^2 sin^2 g_i),
    // with L = dist_rx_s * dist_s_tx / (dist_rx_s + dist_s_tx) and
    //   g_1,2 = (pi -+ (phi_obs - phi_inc)) / (2n)
    //   g_3   = (pi -  (phi_obs + phi_inc)) / (2n)   paired with r0
    //   g_4   = (pi +  (phi_obs + phi_inc)) / (2n)   paired with rn.
    // Where a cotangent pole meets the vanishing transition function the
    // finite one-sided limit -+ sqrt(L)/2 is substituted, which keeps the
    // total field continuous across shadow and reflection boundaries.
    std::complex<double> utd_coefficient(const WedgeDiffractionInput &in, const WaveContext &ctx);

    // Field of a singly diffracted ray:
    //   e0 / dist_rx_s * I * sqrt(dist_rx_s / (dist_s_tx (dist_rx_s + dist_s_tx)))
    //      * exp(-j k (dist_rx_s + dist_s_tx)).
    std::complex<double> diffracted_field(std::complex<double> e0, const WedgeDiffractionInput &in,
                                          const WaveContext &ctx);

    // Heuristic face reflection coefficients for a dielectric wedge. Each
    // face sees the incidence angle the ray geometry implies for it (folded
    // into [0, pi/2)); soft_weight in [0, 1] blends the perpendicular
    // (field parallel to the edge) and parallel coefficients.
    // Returns {r0, rn}.
    std::pair<double, double> wedge_face_coefficients(double epsilon_r, double phi_incidence,
                                                      double phi_observation, double n_factor,
                                                      double soft_weight);

    // Loss of a ray relative to the direct-path reference field, dB:
    // 20 log10(|e_ray| / |e_los|), <= 0 for physical single-bounce rays.
    // Throws when the reference field vanishes.
    double excess_loss_db(std::complex<double> e_ray, std::complex<double> e_los);

    // Path power bookkeeping in the dB domain: P = p0 + extra.
    double nlos_power_db(double p0_db, double extra_db);

} // namespace uavrt

#endif
