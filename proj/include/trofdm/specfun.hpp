// SPDX-License-Identifier: Apache-2.0
//
// trofdm: frequency-domain time-reversal MISO-OFDM simulation and NMSE analysis
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

// Special functions used by the NMSE analysis:
//   - gamma family, including the upper incomplete gamma for non-positive first argument
//   - modified Bessel function of the second kind K_M (quadrature reference and the
//     truncated double series in Lah numbers)
//   - Psi and G coefficients of that series
//
// All functions are pure and thread-safe.

#include "trofdm/types.hpp"

namespace trofdm::specfun
{
    /// Number of expansion terms D of the Bessel-K series.
    struct SeriesTruncation
    {
        int terms = 10;

        void validate() const
        {
            if (terms < 0)
                throw ConfigError("SeriesTruncation: number of terms must be non-negative");
        }
    };

    using LahInt = unsigned __int128;

    /// Unsigned Lah number L(l, q) = C(l-1, q-1) l!/q!, with L(0,0) = 1, L(l,0) = 0 for l > 0
    /// and L(l,q) = 0 for q > l. Exact; throws std::overflow_error past 128 bits.
    LahInt lah(unsigned l, unsigned q);

    /// Gamma function for real arguments (poles throw DomainError).
    double gamma_fn(double a);

    /// Lower incomplete gamma, integral of x^(a-1) e^(-x) over [0, t]. Requires a > 0, t >= 0.
    double gamma_lower(double a, double t);

    /// Upper incomplete gamma, integral of x^(a-1) e^(-x) over [t, inf).
    /// Any real a when t > 0; t = 0 only for a > 0 (returns Gamma(a)).
    /// For a <= 0 and t <= 1 the value comes from the downward recurrence
    ///     Gamma_up(a, t) = (Gamma_up(a+1, t) - t^a e^(-t)) / a
    /// started at a + ceil(-a) in (0, 1] or at E1(t) for integer a. For t > 1 the
    /// recurrence amplifies the anchor error by ~t/|a| per step, so a continued fraction
    /// is evaluated directly instead.
    double gamma_upper(double a, double t);

    /// K_M(x) from the integral of exp(-x cosh t) cosh(M t) over [0, inf), by the
    /// trapezoid rule with step halving. The upper limit is placed where the integrand
    /// has fallen e^-40 below its peak.
    double bessel_k_ref(int order, double x);

    /// log K_M(x), computed as bessel_k_ref but without forming K itself, so it stays
    /// finite for large orders at small x.
    double log_bessel_k_ref(int order, double x);

    /// Psi(M, l, q) coefficient of the Bessel-K series. Requires M >= 1 and q <= l.
    /// Gamma(1/2 + l - M) / Gamma(1/2 - M) is evaluated as prod_{j<l} (1/2 - M + j).
    double psi_coeff(int order, int l, int q);

    /// Truncated series sum_{q<=D} sum_{q<=l<=D} Psi(M,l,q) e^(-x) x^(q-M).
    /// Order 0 is assembled from orders 1 and 2: K0 = K2 - (2/x) K1.
    double bessel_k_series(int order, double x, SeriesTruncation trunc = {});

    /// G_{U N_T}(q): sum_{l=q}^{D} Psi(U N_T - 1, l, q) when U N_T > 1, and
    /// sum_{l=q}^{D} (Psi(2,l,q) - 2 Psi(1,l,q)) when U N_T = 1.
    double g_coeff(int u_times_nt, int q, SeriesTruncation trunc = {});
}
