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

#include "trofdm/specfun.hpp"

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace trofdm::specfun
{
    namespace
    {
        LahInt checked_mul(LahInt a, LahInt b)
        {
            LahInt r;
            if (__builtin_mul_overflow(a, b, &r))
                throw std::overflow_error("lah: result exceeds 128-bit integer range");
            return r;
        }

        // C(n, k) with exact intermediate division
        LahInt binomial(unsigned n, unsigned k)
        {
            if (k > n)
                return 0;
            k = std::min(k, n - k);
            LahInt c = 1;
            for (unsigned i = 1; i <= k; ++i)
                c = checked_mul(c, n - k + i) / i;
            return c;
        }

        void require_finite(double v, const char *what)
        {
            if (!std::isfinite(v))
                throw DomainError(std::string(what) + ": non-finite argument");
        }

        // Modified Lentz evaluation of
        //   Gamma_up(a, t) = e^-t t^a / (t + 1 - a - 1(1-a)/(t + 3 - a - 2(2-a)/(t + 5 - a - ...)))
        // valid for any real a and t > 0; converges in O(10) terms for t > 1.
        double gamma_upper_cf(double a, double t)
        {
            constexpr double tiny = 1e-300;
            constexpr double eps = 1e-16;
            double b = t + 1.0 - a;
            double c = 1.0 / tiny;
            double d = 1.0 / b;
            double h = d;
            for (int i = 1; i < 10000; ++i)
            {
                const double an = -i * (i - a);
                b += 2.0;
                d = an * d + b;
                if (std::abs(d) < tiny)
                    d = tiny;
                c = b + an / c;
                if (std::abs(c) < tiny)
                    c = tiny;
                d = 1.0 / d;
                const double delta = d * c;
                h *= delta;
                if (std::abs(delta - 1.0) < eps)
                    break;
            }
            return std::exp(a * std::log(t) - t) * h;
        }
    }

    LahInt lah(unsigned l, unsigned q)
    {
        if (l == 0 && q == 0)
            return 1;
        if (q == 0 || q > l)
            return 0;
        LahInt falling = 1; // l! / q!
        for (unsigned j = q + 1; j <= l; ++j)
            falling = checked_mul(falling, j);
        return checked_mul(binomial(l - 1, q - 1), falling);
    }

    double gamma_fn(double a)
    {
        require_finite(a, "gamma_fn");
        if (a <= 0.0 && a == std::floor(a))
            throw DomainError("gamma_fn: pole at non-positive integer " + std::to_string(a));
        return boost::math::tgamma(a);
    }

    double gamma_lower(double a, double t)
    {
        require_finite(a, "gamma_lower");
        require_finite(t, "gamma_lower");
        if (a <= 0.0)
            throw DomainError("gamma_lower: requires a > 0, got a = " + std::to_string(a));
        if (t < 0.0)
            throw DomainError("gamma_lower: requires t >= 0");
        if (t == 0.0)
            return 0.0;
        return boost::math::tgamma_lower(a, t);
    }

    double gamma_upper(double a, double t)
    {
        require_finite(a, "gamma_upper");
        require_finite(t, "gamma_upper");
        if (t < 0.0)
            throw DomainError("gamma_upper: requires t >= 0");
        if (t == 0.0)
        {
            if (a <= 0.0)
                throw DomainError("gamma_upper: diverges for a <= 0 at t = 0");
            return boost::math::tgamma(a);
        }
        if (a > 0.0)
            return boost::math::tgamma(a, t);
        if (t > 1.0)
            return gamma_upper_cf(a, t);

        const double steps = std::ceil(-a);
        double anchor = a + steps;
        double value;
        if (anchor == 0.0)
            value = boost::math::expint(1, t);
        else
        {
            // non-integer a: anchor in (0, 1); step down once more from it
            value = boost::math::tgamma(anchor, t);
        }
        const double log_t = std::log(t);
        const double et = std::exp(-t);
        while (anchor > a + 0.5)
        {
            anchor -= 1.0;
            value = (value - std::exp(anchor * log_t) * et) / anchor;
        }
        return value;
    }

    double bessel_k_ref(int order, double x)
    {
        require_finite(x, "bessel_k_ref");
        if (x <= 0.0)
            throw DomainError("bessel_k_ref: requires x > 0");
        return std::exp(log_bessel_k_ref(order, x));
    }

    double log_bessel_k_ref(int order, double x)
    {
        require_finite(x, "log_bessel_k_ref");
        if (x <= 0.0)
            throw DomainError("log_bessel_k_ref: requires x > 0");
        if (order < 0)
            order = -order;
        const double m = order;

        // log of the scaled integrand exp(-x (cosh t - 1)) e^(m t)
        auto log_g = [&](double t) { return -x * (std::cosh(t) - 1.0) + m * t; };
        const double t_peak = std::asinh(m / x);
        const double log_peak = log_g(t_peak);

        constexpr double drop = 40.0; // e^-40 ~ 4e-18
        double step = 1.0;
        double t_end = t_peak + step;
        while (log_g(t_end) > log_peak - drop)
        {
            step *= 1.5;
            t_end += step;
        }

        auto integrand = [&](double t) {
            return std::exp(log_g(t) - log_peak) * 0.5 * (1.0 + std::exp(-2.0 * m * t));
        };
        // The integrand is even and entire in t, so the trapezoid rule converges
        // geometrically in the number of nodes. Halve the step until two successive
        // estimates agree; the last one is then far more accurate than their difference.
        int nodes = 16;
        double h = t_end / nodes;
        double inner = 0.0;
        for (int k = 1; k < nodes; ++k)
            inner += integrand(k * h);
        const double ends = 0.5 * (integrand(0.0) + integrand(t_end));
        double estimate = h * (ends + inner);
        for (int level = 0; level < 20; ++level)
        {
            double added = 0.0;
            for (int k = 1; k < 2 * nodes; k += 2)
                added += integrand(k * 0.5 * h);
            inner += added;
            nodes *= 2;
            h *= 0.5;
            const double next = h * (ends + inner);
            const bool converged = std::abs(next - estimate) <= 1e-13 * next;
            estimate = next;
            if (converged && level >= 1)
                break;
        }
        return std::log(estimate) + log_peak - x;
    }

    double psi_coeff(int order, int l, int q)
    {
        if (order < 1)
            throw DomainError("psi_coeff: order must be >= 1 (Gamma(2M) has a pole at M = 0)");
        if (q < 0 || l < q)
            throw DomainError("psi_coeff: requires 0 <= q <= l");

        const double m = order;
        double ratio = 1.0; // Gamma(1/2 + l - M) / Gamma(1/2 - M)
        for (int j = 0; j < l; ++j)
            ratio *= 0.5 - m + j;

        const double log_mag = std::lgamma(2.0 * m) - std::lgamma(0.5 + l + m) - std::lgamma(l + 1.0);
        const double lah_lq = static_cast<double>(lah(static_cast<unsigned>(l), static_cast<unsigned>(q)));
        const double sign = (q % 2 == 0) ? 1.0 : -1.0;
        return sign * std::sqrt(std::numbers::pi) * std::ldexp(std::exp(log_mag) * ratio * lah_lq, q - order);
    }

    double bessel_k_series(int order, double x, SeriesTruncation trunc)
    {
        require_finite(x, "bessel_k_series");
        if (x <= 0.0)
            throw DomainError("bessel_k_series: requires x > 0");
        trunc.validate();
        if (order < 0)
            order = -order;
        if (order == 0)
            return bessel_k_series(2, x, trunc) - 2.0 / x * bessel_k_series(1, x, trunc);

        const int d = trunc.terms;
        double poly = 0.0; // sum_q c_q x^q, Horner from the top
        for (int q = d; q >= 0; --q)
        {
            double c = 0.0;
            for (int l = q; l <= d; ++l)
                c += psi_coeff(order, l, q);
            poly = poly * x + c;
        }
        return poly * std::exp(-x - order * std::log(x));
    }

    double g_coeff(int u_times_nt, int q, SeriesTruncation trunc)
    {
        trunc.validate();
        if (u_times_nt < 1)
            throw DomainError("g_coeff: U*N_T must be >= 1");
        if (q < 0 || q > trunc.terms)
            throw DomainError("g_coeff: requires 0 <= q <= D");
        double g = 0.0;
        for (int l = q; l <= trunc.terms; ++l)
        {
            if (u_times_nt > 1)
                g += psi_coeff(u_times_nt - 1, l, q);
            else
                g += psi_coeff(2, l, q) - 2.0 * psi_coeff(1, l, q);
        }
        return g;
    }
}
