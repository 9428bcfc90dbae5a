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

// NMSE of the MMSE-equalized FD/TR link, as a function of the linear SNR gamma, the rate
// back-off factor U and the antenna count N_T, with M = U * N_T.
//
// Intended position: |K_n|^2 / U^2 ~ (z / U)^2 with z ~ Gamma(M, 1). Unintended position:
// |K_n| is distributed as the modulus of a sum of M products of unit complex Gaussians.
// Each position has a quadrature oracle (the exact expectation) and a truncated closed
// form built from incomplete gamma functions.

#include "trofdm/specfun.hpp"

#include <functional>

namespace trofdm::analytic
{
    struct ClosedFormParams
    {
        double gamma = 1.0; // linear SNR
        int bof = 1;        // U
        int n_tx = 1;       // N_T
        specfun::SeriesTruncation trunc;

        int order() const { return bof * n_tx; } // M
        void validate() const;

        static ClosedFormParams at_db(double snr_db, int bof, int n_tx, specfun::SeriesTruncation trunc = {});
    };

    /// gamma^-1 / (M-1)! * int_0^inf z^(M-1) e^-z / (z^2/U^2 + gamma^-1) dz
    double nmse_intended_integral(const ClosedFormParams &p);

    /// Five incomplete-gamma terms evaluated at t = U gamma^-1/2.
    double nmse_intended_closed(const ClosedFormParams &p);

    /// 4 gamma^-1 / Gamma(M) * int_0^inf z^M K_{M-1}(2z) / (z^2/U^2 + gamma^-1) dz,
    /// with the reference (quadrature) Bessel function.
    double nmse_unintended_integral(const ClosedFormParams &p);

    /// Truncated Bessel-series closed form at t = 2 U gamma^-1/2, with the separate M = 1 branch.
    double nmse_unintended_closed(const ClosedFormParams &p);

    /// gamma^-1 / ((N_T - 1/U)(N_T - 2/U)); needs M > 2.
    double asym_intended_high(const ClosedFormParams &p);

    /// 1 - e^-t sum_{k=1}^{M} t^(M-k)/(M-k)! with t = U gamma^-1/2.
    double asym_intended_low(const ClosedFormParams &p);

    /// sum_{q=1}^{D} sum_{l=q}^{D} (-2)^q L(l,q) Gamma(q) (3/2-M)_l / (l! (M-1/2)_l), the
    /// SNR-free constant of the high-SNR unintended asymptote. (x)_l is the rising factorial.
    double asym_unintended_high_constant(int order, specfun::SeriesTruncation trunc = {});

    /// 2 gamma^-1 U^2 / (M - 1) * asym_unintended_high_constant(M); needs M > 1.
    double asym_unintended_high(const ClosedFormParams &p);

    /// The same asymptote before Gamma_up(q, 2U gamma^-1/2) is replaced by Gamma(q), so it
    /// keeps the q = 0 term and a mild SNR dependence inside the sum; needs M > 1.
    double asym_unintended_high_incomplete(const ClosedFormParams &p);

    /// SNR in dB at which the decreasing curve `nmse_of_snr_db` reaches `target_nmse`,
    /// by bisection on log NMSE inside [lo_db, hi_db]. Throws DomainError if the target is
    /// not bracketed.
    double solve_snr_db_for_nmse(const std::function<double(double)> &nmse_of_snr_db, double target_nmse,
                                 double lo_db = -20.0, double hi_db = 80.0, double tol_db = 1e-6);
}
