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

#include "trofdm/analytic.hpp"
#include "trofdm/quadrature.hpp"
#include "trofdm/types.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace trofdm::analytic
{
    using specfun::gamma_lower;
    using specfun::gamma_upper;

    void ClosedFormParams::validate() const
    {
        if (!std::isfinite(gamma) || !(gamma > 0.0))
            throw DomainError("SNR must be positive and finite");
        if (bof < 1 || n_tx < 1)
            throw DomainError("U and N_T must be >= 1");
        trunc.validate();
    }

    ClosedFormParams ClosedFormParams::at_db(double snr_db, int bof, int n_tx, specfun::SeriesTruncation trunc)
    {
        return {db_to_linear(snr_db), bof, n_tx, trunc};
    }

    double nmse_intended_integral(const ClosedFormParams &p)
    {
        p.validate();
        const int m = p.order();
        const double inv_g = 1.0 / p.gamma;
        const double u2 = static_cast<double>(p.bof) * p.bof;
        const double log_norm = std::lgamma(static_cast<double>(m));
        auto f = [&](double z) {
            if (z <= 0.0)
                return m == 1 ? 1.0 / inv_g : 0.0;
            const double dens = std::exp((m - 1) * std::log(z) - z - log_norm);
            return dens / (z * z / u2 + inv_g);
        };
        // The denominator changes character at z = U gamma^-1/2 and the density peaks at M - 1.
        const double t = p.bof * std::sqrt(inv_g);
        const double peak = std::max(static_cast<double>(m - 1), t);
        double acc = quad::tanh_sinh(f, 0.0, t, 1e-12);
        if (peak > t)
            acc += quad::tanh_sinh(f, t, peak, 1e-12);
        acc += quad::exp_sinh(f, peak, 1e-12);
        return inv_g * acc;
    }

    double nmse_intended_closed(const ClosedFormParams &p)
    {
        p.validate();
        const int m = p.order();
        const double inv_g = 1.0 / p.gamma;
        const double u2g = static_cast<double>(p.bof) * p.bof * inv_g; // U^2 gamma^-1 = t^2
        const double t = std::sqrt(u2g);
        const double s = gamma_lower(m, t) - gamma_lower(m + 2, t) / u2g + gamma_lower(m + 4, t) / (u2g * u2g) +
                         u2g * gamma_upper(m - 2, t) - u2g * u2g * gamma_upper(m - 4, t);
        return s / std::tgamma(static_cast<double>(m));
    }

    double nmse_unintended_integral(const ClosedFormParams &p)
    {
        p.validate();
        const int m = p.order();
        const double inv_g = 1.0 / p.gamma;
        const double u2 = static_cast<double>(p.bof) * p.bof;
        const double log_norm = std::log(4.0) - std::lgamma(static_cast<double>(m));
        auto f = [&](double z) {
            if (z <= 0.0)
                return 0.0;
            // Below 1e-8 use the leading small-argument term of z^M K_{M-1}(2z), which
            // avoids overflowing K for large orders.
            if (z < 1e-8)
            {
                const double lead = m == 1 ? -z * (std::log(z) + std::numbers::egamma)
                                           : 0.5 * std::tgamma(m - 1.0) * z;
                return std::exp(log_norm) * lead / (z * z / u2 + inv_g);
            }
            const double dens = std::exp(log_norm + m * std::log(z) + specfun::log_bessel_k_ref(m - 1, 2.0 * z));
            return dens / (z * z / u2 + inv_g);
        };
        // |K| has mean of order sqrt(M) and an e^(-2z) tail; beyond 2M + 25 the density is
        // below e^-50 of its peak.
        const double t = p.bof * std::sqrt(inv_g);
        const double hi = 25.0 + 2.0 * m;
        double acc = 0.0;
        if (t < hi)
        {
            acc += quad::tanh_sinh(f, 0.0, t, 1e-10);
            acc += quad::tanh_sinh(f, t, hi, 1e-10);
        }
        else
        {
            acc += quad::tanh_sinh(f, 0.0, hi, 1e-10);
        }
        return inv_g * acc;
    }

    double nmse_unintended_closed(const ClosedFormParams &p)
    {
        p.validate();
        const int m = p.order();
        const int d = p.trunc.terms;
        const double inv_g = 1.0 / p.gamma;
        const double u2g = static_cast<double>(p.bof) * p.bof * inv_g;
        const double t = 2.0 * std::sqrt(u2g);

        double sum = 0.0;
        if (m > 1)
        {
            for (int q = 0; q <= d; ++q)
            {
                const double bracket = std::ldexp(gamma_lower(q + 2, t), -(m - 1)) -
                                       std::ldexp(gamma_lower(q + 4, t), -(m + 1)) / u2g +
                                       std::ldexp(gamma_lower(q + 6, t), -(m + 3)) / (u2g * u2g) +
                                       std::ldexp(u2g, 3 - m) * gamma_upper(q, t) -
                                       std::ldexp(u2g * u2g, 5 - m) * gamma_upper(q - 2, t);
                sum += specfun::g_coeff(m, q, p.trunc) * bracket;
            }
            return sum / std::tgamma(static_cast<double>(m));
        }

        // The q = 0 coefficient of the M = 1 branch is exactly zero (the order-2 and order-1
        // Bessel singularities cancel), while Gamma_low(0, t) diverges; the term is dropped.
        for (int q = 1; q <= d; ++q)
        {
            const double bracket = gamma_lower(q, t) - gamma_lower(q + 2, t) / (4.0 * u2g) +
                                   gamma_lower(q + 4, t) / (16.0 * u2g * u2g) + 4.0 * u2g * gamma_upper(q - 2, t) -
                                   16.0 * u2g * u2g * gamma_upper(q - 4, t);
            sum += specfun::g_coeff(1, q, p.trunc) * bracket;
        }
        return sum;
    }

    double asym_intended_high(const ClosedFormParams &p)
    {
        p.validate();
        if (p.order() <= 2)
            throw DomainError("high-SNR intended asymptote needs U * N_T > 2");
        const double u = p.bof;
        return 1.0 / (p.gamma * (p.n_tx - 1.0 / u) * (p.n_tx - 2.0 / u));
    }

    double asym_intended_low(const ClosedFormParams &p)
    {
        p.validate();
        const int m = p.order();
        const double t = p.bof / std::sqrt(p.gamma);
        // Terms t^j / j! for j = 0 .. M-1, built incrementally.
        double term = 1.0;
        double sum = 0.0;
        for (int j = 0; j < m; ++j)
        {
            sum += term;
            term *= t / (j + 1);
        }
        return 1.0 - std::exp(-t) * sum;
    }

    namespace
    {
        double rising(double a, int n)
        {
            double r = 1.0;
            for (int j = 0; j < n; ++j)
                r *= a + j;
            return r;
        }

        void require_order_above_one(const ClosedFormParams &p)
        {
            p.validate();
            if (p.order() <= 1)
                throw DomainError("high-SNR unintended asymptote needs U * N_T > 1");
        }
    }

    double asym_unintended_high_constant(int order, specfun::SeriesTruncation trunc)
    {
        trunc.validate();
        if (order <= 1)
            throw DomainError("high-SNR unintended asymptote needs U * N_T > 1");
        const double m = order;
        double s = 0.0;
        for (int q = 1; q <= trunc.terms; ++q)
        {
            const double sign_pow = std::ldexp(q % 2 ? -1.0 : 1.0, q);
            for (int l = q; l <= trunc.terms; ++l)
            {
                const double lah = static_cast<double>(specfun::lah(l, q));
                s += sign_pow * lah * std::tgamma(static_cast<double>(q)) * rising(1.5 - m, l) /
                     (std::tgamma(l + 1.0) * rising(m - 0.5, l));
            }
        }
        return s;
    }

    double asym_unintended_high(const ClosedFormParams &p)
    {
        require_order_above_one(p);
        const double u2 = static_cast<double>(p.bof) * p.bof;
        const int m = p.order();
        return 2.0 * u2 / (p.gamma * (m - 1)) * asym_unintended_high_constant(m, p.trunc);
    }

    double asym_unintended_high_incomplete(const ClosedFormParams &p)
    {
        require_order_above_one(p);
        const double m = p.order();
        const double u2 = static_cast<double>(p.bof) * p.bof;
        const double t = 2.0 * p.bof / std::sqrt(p.gamma);
        const double log_pre = 0.5 * std::log(std::numbers::pi) + std::lgamma(2.0 * (m - 1.0)) -
                               (2.0 * m - 4.0) * std::numbers::ln2 - std::lgamma(m);
        double s = 0.0;
        for (int q = 0; q <= p.trunc.terms; ++q)
        {
            const double gq = gamma_upper(q, t);
            const double sign_pow = std::ldexp(q % 2 ? -1.0 : 1.0, q);
            for (int l = q; l <= p.trunc.terms; ++l)
            {
                const double lah = static_cast<double>(specfun::lah(l, q));
                if (lah == 0.0)
                    continue;
                const double mag = std::exp(log_pre - std::lgamma(m - 0.5 + l) - std::lgamma(l + 1.0));
                s += sign_pow * lah * rising(1.5 - m, l) * mag * gq;
            }
        }
        return u2 / p.gamma * s;
    }

    double solve_snr_db_for_nmse(const std::function<double(double)> &nmse_of_snr_db, double target_nmse,
                                 double lo_db, double hi_db, double tol_db)
    {
        if (!(target_nmse > 0.0) || !(lo_db < hi_db))
            throw DomainError("invalid root-finding bracket or target");
        const double log_target = std::log(target_nmse);
        auto g = [&](double s) { return std::log(nmse_of_snr_db(s)) - log_target; };
        double g_lo = g(lo_db);
        const double g_hi = g(hi_db);
        if (!(g_lo > 0.0 && g_hi < 0.0))
            throw DomainError("target NMSE " + std::to_string(target_nmse) + " not bracketed by [" +
                              std::to_string(lo_db) + ", " + std::to_string(hi_db) + "] dB");
        while (hi_db - lo_db > tol_db)
        {
            const double mid = 0.5 * (lo_db + hi_db);
            const double g_mid = g(mid);
            if (g_mid > 0.0)
            {
                lo_db = mid;
                g_lo = g_mid;
            }
            else
            {
                hi_db = mid;
            }
        }
        return 0.5 * (lo_db + hi_db);
    }
}
