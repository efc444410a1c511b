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

#include "uavrt/em.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace uavrt
{

    constexpr double pi = std::numbers::pi;

    WaveContext::WaveContext(double f_mhz)
    {
        if (!(f_mhz > 0.0) || !std::isfinite(f_mhz))
            throw std::invalid_argument("Carrier frequency must be positive.");
        frequency_mhz = f_mhz;
        wavelength_m = speed_of_light / (f_mhz * 1e6);
        wavenumber = 2.0 * pi / wavelength_m;
    }

    double fspl_db(const WaveContext &ctx, double distance_m)
    {
        if (!(distance_m > 0.0))
            throw std::invalid_argument("Free-space loss requires a positive distance.");
        return 32.44 + 20.0 * std::log10(ctx.frequency_mhz) + 20.0 * std::log10(distance_m / 1000.0);
    }

    std::complex<double> los_field(const WaveContext &ctx, double distance_m)
    {
        if (!(distance_m > 0.0))
            throw std::invalid_argument("Direct field requires a positive distance.");
        return std::polar(1.0 / distance_m, -ctx.wavenumber * distance_m);
    }

    double reflection_coefficient(double epsilon_r, double theta_from_normal, Polarization pol)
    {
        if (!(epsilon_r > 1.0))
            throw std::invalid_argument("Relative permittivity must exceed 1.");
        if (!(theta_from_normal >= 0.0) || !(theta_from_normal < pi / 2.0))
            throw std::invalid_argument("Incidence angle must lie in [0, pi/2).");

        const double ct = std::cos(theta_from_normal);
        const double st = std::sin(theta_from_normal);
        const double root = std::sqrt(epsilon_r - st * st);
        if (pol == Polarization::parallel)
            return (epsilon_r * ct - root) / (epsilon_r * ct + root);
        return (ct - root) / (ct + root);
    }

    std::complex<double> reflected_field(std::complex<double> e0, double r,
                                         double dist_rx_s, double dist_s_tx, const WaveContext &ctx)
    {
        if (!(dist_rx_s > 0.0) || !(dist_s_tx > 0.0))
            throw std::invalid_argument("Reflected path legs must be positive.");
        const double total = dist_rx_s + dist_s_tx;
        return e0 * r * std::polar(1.0 / total, -ctx.wavenumber * total);
    }

    // ---- Fresnel cosine/sine integrals -------------------------------------
    // C(w) = Integral_0^w cos(pi t^2 / 2) dt, S(w) likewise with sine.
    // Composite 16-point Gauss-Legendre handles w <= 8; the auxiliary
    // asymptotic expansion takes over beyond, where three terms already sit
    // below 1e-10.

    namespace
    {

        struct GaussRule
        {
            std::array<double, 16> node;
            std::array<double, 16> weight;
        };

        GaussRule make_gauss_rule()
        {
            GaussRule rule{};
            const int n = 16;
            for (int i = 0; i < n / 2; i++)
            {
                double x = std::cos(pi * (i + 0.75) / (n + 0.5));
                double dp = 0.0;
                for (int iter = 0; iter < 100; iter++)
                {
                    double p0 = 1.0, p1 = 0.0;
                    for (int j = 0; j < n; j++)
                    {
                        double p2 = p1;
                        p1 = p0;
                        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
                    }
                    dp = n * (x * p0 - p1) / (x * x - 1.0);
                    double dx = p0 / dp;
                    x -= dx;
                    if (std::abs(dx) < 1e-16)
                        break;
                }
                double w = 2.0 / ((1.0 - x * x) * dp * dp);
                rule.node[i] = -x;
                rule.node[n - 1 - i] = x;
                rule.weight[i] = w;
                rule.weight[n - 1 - i] = w;
            }
            return rule;
        }

        void fresnel_cs(double w, double &c, double &s)
        {
            if (w <= 8.0)
            {
                static const GaussRule rule = make_gauss_rule();
                c = 0.0;
                s = 0.0;
                const int segments = std::max(1, int(std::ceil(w / 0.4)));
                const double h = w / segments;
                for (int seg = 0; seg < segments; seg++)
                {
                    const double a = seg * h;
                    const double half = 0.5 * h;
                    const double mid = a + half;
                    for (int i = 0; i < 16; i++)
                    {
                        const double t = mid + half * rule.node[i];
                        const double phase = 0.5 * pi * t * t;
                        c += rule.weight[i] * half * std::cos(phase);
                        s += rule.weight[i] * half * std::sin(phase);
                    }
                }
                return;
            }

            const double u = pi * w * w;
            const double inv_u2 = 1.0 / (u * u);
            const double f = (1.0 - 3.0 * inv_u2 + 105.0 * inv_u2 * inv_u2) / (pi * w);
            const double g = (1.0 - 15.0 * inv_u2 + 945.0 * inv_u2 * inv_u2) / (pi * w * u);
            const double cu = std::cos(0.5 * u);
            const double su = std::sin(0.5 * u);
            c = 0.5 + f * su - g * cu;
            s = 0.5 - f * cu - g * su;
        }

    } // namespace

    std::complex<double> transition_function(double x)
    {
        if (x < 0.0)
            throw std::invalid_argument("Transition function argument must be non-negative.");
        if (x == 0.0)
            return {0.0, 0.0};

        if (x < 1e-8)
        {
            // Leading-order series of the defining integral.
            const std::complex<double> j{0.0, 1.0};
            return std::polar(1.0, x) * (std::sqrt(pi * x) * std::polar(1.0, pi / 4.0) - 2.0 * x * j);
        }

        if (x > 5e3)
        {
            // Large-argument expansion F = 1 + j/(2x) - 3/(4x^2) - 15j/(8x^3).
            const double inv = 1.0 / x;
            return {1.0 - 0.75 * inv * inv, 0.5 * inv - 1.875 * inv * inv * inv};
        }

        // Mid range via Fresnel integrals:
        // Integral_{sqrt(x)}^inf e^{-j tau^2} d tau
        //   = sqrt(pi/2) * [(1/2 - C(w)) - j (1/2 - S(w))], w = sqrt(2x/pi).
        double c, s;
        fresnel_cs(std::sqrt(2.0 * x / pi), c, s);
        const std::complex<double> tail = std::sqrt(pi / 2.0) * std::complex<double>(0.5 - c, -(0.5 - s));
        const std::complex<double> j{0.0, 1.0};
        return 2.0 * j * std::sqrt(x) * std::polar(1.0, x) * tail;
    }

    namespace
    {

        // One cotangent/transition product of the diffraction sum. Where the
        // cotangent pole meets the vanishing transition argument, substitute
        // the finite one-sided limit -+ sqrt(L)/2 (relative to the shared
        // prefactor); an exact boundary hit resolves to the shadow-side limit.
        std::complex<double> diffraction_term(double gamma, double two_k_l_n2, double k, double n, double l_dist)
        {
            const double offset = gamma - pi * std::round(gamma / pi);
            const std::complex<double> prefactor =
                -std::polar(1.0, -pi / 4.0) / (2.0 * n * std::sqrt(2.0 * pi * k));

            if (std::abs(offset) < 1e-8)
            {
                const double side = offset <= 0.0 ? -1.0 : 1.0;
                return {-side * 0.5 * std::sqrt(l_dist), 0.0};
            }

            const double sg = std::sin(gamma);
            const double cot = std::cos(gamma) / sg;
            return prefactor * cot * transition_function(two_k_l_n2 * sg * sg);
        }

    } // namespace

    std::complex<double> utd_coefficient(const WedgeDiffractionInput &in, const WaveContext &ctx)
    {
        if (!(in.dist_rx_s > 0.0) || !(in.dist_s_tx > 0.0))
            throw std::invalid_argument("Diffraction path legs must be positive.");
        if (!(in.n_factor >= 1.0) || !(in.n_factor <= 2.0))
            throw std::invalid_argument("Wedge exterior angle factor must lie in [1, 2].");
        const double n_pi = in.n_factor * pi;
        if (in.phi_incidence < -1e-9 || in.phi_incidence > n_pi + 1e-9 ||
            in.phi_observation < -1e-9 || in.phi_observation > n_pi + 1e-9)
            throw std::invalid_argument("Wedge angles must lie inside the exterior region [0, n*pi].");

        const double n = in.n_factor;
        const double k = ctx.wavenumber;
        const double l_dist = in.dist_rx_s * in.dist_s_tx / (in.dist_rx_s + in.dist_s_tx);
        const double two_k_l_n2 = 2.0 * k * l_dist * n * n;

        const double diff = in.phi_observation - in.phi_incidence;
        const double sum = in.phi_observation + in.phi_incidence;
        const double g1 = (pi - diff) / (2.0 * n);
        const double g2 = (pi + diff) / (2.0 * n);
        const double g3 = (pi - sum) / (2.0 * n);
        const double g4 = (pi + sum) / (2.0 * n);

        return diffraction_term(g1, two_k_l_n2, k, n, l_dist) +
               diffraction_term(g2, two_k_l_n2, k, n, l_dist) +
               in.r0 * diffraction_term(g3, two_k_l_n2, k, n, l_dist) +
               in.rn * diffraction_term(g4, two_k_l_n2, k, n, l_dist);
    }

    std::complex<double> diffracted_field(std::complex<double> e0, const WedgeDiffractionInput &in,
                                          const WaveContext &ctx)
    {
        if (!(in.dist_rx_s > 0.0) || !(in.dist_s_tx > 0.0))
            throw std::invalid_argument("Diffraction path legs must be positive.");
        const double total = in.dist_rx_s + in.dist_s_tx;
        const double spreading = std::sqrt(in.dist_rx_s / (in.dist_s_tx * total));
        const std::complex<double> coeff = utd_coefficient(in, ctx);
        return e0 / in.dist_rx_s * coeff * spreading * std::polar(1.0, -ctx.wavenumber * total);
    }

    std::pair<double, double> wedge_face_coefficients(double epsilon_r, double phi_incidence,
                                                      double phi_observation, double n_factor,
                                                      double soft_weight)
    {
        soft_weight = std::clamp(soft_weight, 0.0, 1.0);
        auto face_theta = [](double face_angle) {
            // Fold the face-local ray angle into a grazing angle in [0, pi/2],
            // then measure the incidence from the face normal.
            const double grazing = std::asin(std::clamp(std::abs(std::sin(face_angle)), 0.0, 1.0));
            return std::min(pi / 2.0 - grazing, pi / 2.0 - 1e-12);
        };
        auto blend = [&](double theta) {
            return soft_weight * reflection_coefficient(epsilon_r, theta, Polarization::perpendicular) +
                   (1.0 - soft_weight) * reflection_coefficient(epsilon_r, theta, Polarization::parallel);
        };
        const double r0 = blend(face_theta(phi_incidence));
        const double rn = blend(face_theta(n_factor * pi - phi_observation));
        return {r0, rn};
    }

    double excess_loss_db(std::complex<double> e_ray, std::complex<double> e_los)
    {
        const double ref = std::abs(e_los);
        if (!(ref > 0.0))
            throw std::invalid_argument("Excess loss needs a non-vanishing reference field.");
        return 20.0 * std::log10(std::abs(e_ray) / ref);
    }

    double nlos_power_db(double p0_db, double extra_db)
    {
        return p0_db + extra_db;
    }

} // namespace uavrt
