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

// Test-side numerical oracles. They share no code with the library: plain adaptive
// Simpson quadrature, a direct DFT and a few closed forms.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle
{
    namespace detail
    {
        inline double simpson_step(const std::function<double(double)> &f, double a, double b, double fa, double fm,
                                   double fb, double whole, double tol, int depth)
        {
            const double m = 0.5 * (a + b);
            const double lm = 0.5 * (a + m);
            const double rm = 0.5 * (m + b);
            const double flm = f(lm);
            const double frm = f(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            const double delta = left + right - whole;
            // Stop at the requested tolerance or once the local refinement is at rounding level.
            const double floor = 1e-14 * (std::abs(left) + std::abs(right));
            if (depth <= 0 || std::abs(delta) <= 15.0 * std::max(tol, floor))
                return left + right + delta / 15.0;
            return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
                   simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
        }
    }

    /// Adaptive Simpson on [a, b] with absolute tolerance `tol`.
    inline double simpson(const std::function<double(double)> &f, double a, double b, double tol = 1e-12,
                          int depth = 40)
    {
        const double fa = f(a);
        const double fb = f(b);
        const double fm = f(0.5 * (a + b));
        const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        return detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, depth);
    }

    /// Integral over [a, inf) by the substitution x = a + s/(1-s) on [0, 1), with the
    /// endpoint s = 1 treated as zero (integrands here decay exponentially).
    inline double simpson_to_inf(const std::function<double(double)> &f, double a, double tol = 1e-12)
    {
        auto g = [&](double s) {
            if (s >= 1.0)
                return 0.0;
            const double d = 1.0 - s;
            return f(a + s / d) / (d * d);
        };
        return simpson(g, 0.0, 1.0, tol);
    }

    /// Integral over a partition; each piece uses Simpson.
    inline double simpson_pieces(const std::function<double(double)> &f, const std::vector<double> &pts,
                                 double tol = 1e-12)
    {
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i)
            acc += simpson(f, pts[i], pts[i + 1], tol);
        return acc;
    }

    /// Unnormalized DFT with e^{-j 2 pi q l / Q}, evaluated with std::polar per term.
    inline std::vector<std::complex<double>> dft(const std::vector<std::complex<double>> &h, int q_len)
    {
        std::vector<std::complex<double>> out(q_len);
        for (int q = 0; q < q_len; ++q)
            for (std::size_t l = 0; l < h.size(); ++l)
                out[q] += h[l] * std::polar(1.0, -2.0 * std::numbers::pi * q * static_cast<double>(l) / q_len);
        return out;
    }

    inline double rel(double a, double b)
    {
        return std::abs(a - b) / std::abs(b);
    }
}
