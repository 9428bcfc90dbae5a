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

#include "oracles.hpp"
#include "trofdm/analytic.hpp"
#include "trofdm/randdist.hpp"

#include <doctest.h>

#include <limits>

using namespace trofdm;
using namespace trofdm::analytic;

namespace
{
    ClosedFormParams at(double snr_db, int u, int nt)
    {
        return ClosedFormParams::at_db(snr_db, u, nt);
    }

    // Intended-position expectation by Simpson, split where the integrand changes shape.
    double intended_oracle(double gamma, int u, int nt)
    {
        const int m = u * nt;
        const double inv_g = 1.0 / gamma;
        auto f = [&](double z) {
            const double dens = z > 0.0 ? std::exp((m - 1) * std::log(z) - z - std::lgamma(m)) : (m == 1 ? 1.0 : 0.0);
            return dens / (z * z / (u * u) + inv_g);
        };
        const double t = u * std::sqrt(inv_g);
        return inv_g * (oracle::simpson_pieces(f, {0.0, t, t + m, t + 3.0 * m + 10.0}, 1e-13) +
                        oracle::simpson_to_inf(f, t + 3.0 * m + 10.0, 1e-15));
    }
}

TEST_SUITE("analytic")
{
    TEST_CASE("intended integral")
    {
        CHECK(oracle::rel(nmse_intended_integral({1.0, 1, 1}), 0.62144962423581336) < 1e-8);
        CHECK(oracle::rel(nmse_intended_integral(at(20.0, 2, 2)), 0.0063216388661189035) < 1e-8);
        CHECK(oracle::rel(nmse_intended_integral(at(10.0, 4, 1)), 0.1548757922747696) < 1e-8);
        for (auto [u, nt] : {std::pair{1, 1}, std::pair{2, 4}, std::pair{8, 2}})
            for (double snr : {-5.0, 7.0, 33.0})
            {
                const auto p = at(snr, u, nt);
                CHECK(oracle::rel(nmse_intended_integral(p), intended_oracle(p.gamma, u, nt)) < 1e-8);
            }
        CHECK(nmse_intended_integral({1e-8, 2, 2}) == doctest::Approx(1.0).epsilon(1e-3));

        double prev = 2.0;
        for (double snr = 0.0; snr <= 40.0; snr += 2.0)
        {
            const double v = nmse_intended_integral(at(snr, 2, 2));
            CHECK(v < prev);
            prev = v;
        }
        CHECK_THROWS_AS(nmse_intended_integral({0.0, 1, 1}), DomainError);
        CHECK_THROWS_AS(nmse_intended_integral({std::numeric_limits<double>::infinity(), 1, 1}), DomainError);
    }

    TEST_CASE("intended closed form against the integral")
    {
        // Within 5% from 10 dB up; the truncated expansion drifts to about 8% at 0 dB.
        for (double snr : {10.0, 15.0, 20.0, 25.0, 30.0})
        {
            const auto p = at(snr, 2, 2);
            CAPTURE(snr);
            CHECK(oracle::rel(nmse_intended_closed(p), nmse_intended_integral(p)) < 0.05);
        }
        const auto p0 = at(0.0, 2, 2);
        const double d0 = oracle::rel(nmse_intended_closed(p0), nmse_intended_integral(p0));
        MESSAGE("closed vs integral at U=2 N_T=2 0dB: ", d0);
        CHECK(d0 == doctest::Approx(0.083).epsilon(0.05));

        // Worst case over the full evaluation grid.
        double worst = 0.0;
        for (int u : {1, 2, 4})
            for (int nt : {1, 2, 4})
                for (double snr : {0.0, 10.0, 20.0, 30.0})
                {
                    const auto p = at(snr, u, nt);
                    worst = std::max(worst, oracle::rel(nmse_intended_closed(p), nmse_intended_integral(p)));
                }
        MESSAGE("worst intended closed-form deviation on the grid: ", worst);
        CHECK(worst < 0.15);

        // High SNR: the closed form approaches U^2 Gamma(M-2) / (gamma (M-1)!).
        for (auto [u, nt] : {std::pair{2, 2}, std::pair{4, 1}, std::pair{4, 4}})
        {
            const int m = u * nt;
            double prev_err = 1.0;
            for (double snr : {30.0, 45.0, 60.0})
            {
                const auto p = at(snr, u, nt);
                const double high = u * u / p.gamma * std::tgamma(m - 2.0) / std::tgamma(static_cast<double>(m));
                const double err = oracle::rel(nmse_intended_closed(p), high);
                CHECK(err < prev_err);
                prev_err = err;
            }
            CHECK(prev_err < 0.01);
        }

        // Low SNR: the Gamma_low-only approximation is 14% off at -10 dB and closes
        // in by roughly an order of magnitude per 10 dB below that.
        auto low_gap = [&](double snr) {
            const auto pl = at(snr, 2, 2);
            const double low = specfun::gamma_lower(4, 2.0 / std::sqrt(pl.gamma)) / 6.0;
            return oracle::rel(nmse_intended_closed(pl), low);
        };
        CHECK(low_gap(-10.0) == doctest::Approx(0.1403).epsilon(0.01));
        CHECK(low_gap(-20.0) < 0.05);
        CHECK(low_gap(-30.0) < 0.005);
    }

    TEST_CASE("unintended integral")
    {
        CHECK(oracle::rel(nmse_unintended_integral({1.0, 1, 1}), 0.66809132637777777) < 1e-7);
        CHECK(oracle::rel(nmse_unintended_integral(at(20.0, 2, 2)), 0.048629598800412211) < 1e-7);
        CHECK(oracle::rel(nmse_unintended_integral(at(10.0, 4, 4)), 0.20706196437227094) < 1e-7);
        CHECK(nmse_unintended_integral({1e-8, 2, 2}) == doctest::Approx(1.0).epsilon(1e-3));

        // Sampling oracle: K ~ |sum of one unit product| at U = N_T = 1.
        Rng rng = derive_rng(21, 0);
        const int n = 200000;
        double sum = 0.0, sum2 = 0.0;
        for (int i = 0; i < n; ++i)
        {
            const double k = randdist::sample_product_sum({1, 1.0, 1.0}, rng);
            const double v = 1.0 / (k * k + 1.0);
            sum += v;
            sum2 += v * v;
        }
        const double mean = sum / n;
        const double se = std::sqrt((sum2 / n - mean * mean) / n);
        CHECK(std::abs(mean - nmse_unintended_integral({1.0, 1, 1})) < 3.0 * se);

        for (double snr : {10.0, 20.0, 30.0})
            CHECK(nmse_unintended_integral(at(snr, 2, 2)) > nmse_intended_integral(at(snr, 2, 2)));
    }

    TEST_CASE("unintended closed form against the integral")
    {
        for (auto [u, nt] : {std::pair{2, 2}, std::pair{1, 1}})
            for (double snr : {0.0, 5.0, 10.0, 15.0, 20.0, 25.0})
            {
                const auto p = at(snr, u, nt);
                CAPTURE(u);
                CAPTURE(snr);
                CHECK(oracle::rel(nmse_unintended_closed(p), nmse_unintended_integral(p)) < 0.10);
            }
    }

    TEST_CASE("intended asymptotes")
    {
        CHECK(asym_intended_high({1.0, 1024, 2}) == doctest::Approx(0.25).epsilon(1e-3));
        const auto p = at(30.0, 2, 2);
        CHECK(oracle::rel(asym_intended_high(p), nmse_intended_closed(p)) < 0.15);
        auto p2 = p;
        p2.gamma *= 2.0;
        CHECK(asym_intended_high(p2) == doctest::Approx(0.5 * asym_intended_high(p)).epsilon(1e-15));
        CHECK_THROWS_AS(asym_intended_high(at(10.0, 2, 1)), DomainError);
        CHECK_THROWS_AS(asym_intended_high(at(10.0, 1, 1)), DomainError);

        const auto p16 = at(40.0, 16, 2);
        const double scaled = p16.gamma * nmse_intended_closed(p16);
        CHECK(scaled >= 0.25 * 0.85);
        CHECK(scaled <= 0.25 * 1.15);

        CHECK(asym_intended_low({1e-10, 2, 2}) == doctest::Approx(1.0).epsilon(1e-6));
        for (int m : {1, 2, 5, 9})
            for (double snr : {-10.0, 0.0, 10.0})
            {
                const auto q = at(snr, m, 1);
                const double t = m / std::sqrt(q.gamma);
                CHECK(oracle::rel(asym_intended_low(q), specfun::gamma_lower(m, t) / std::tgamma(m)) < 1e-10);
            }
        auto low_gap = [&](double snr) {
            const auto pl = at(snr, 2, 2);
            return oracle::rel(asym_intended_low(pl), nmse_intended_integral(pl));
        };
        CHECK(low_gap(-10.0) == doctest::Approx(0.2131).epsilon(0.01));
        CHECK(low_gap(-20.0) < 0.05);
        CHECK(low_gap(-30.0) < 0.0055);
    }

    TEST_CASE("unintended high-SNR asymptote")
    {
        CHECK(oracle::rel(asym_unintended_high_constant(2), 0.69190788571593525) < 1e-12);
        CHECK(oracle::rel(asym_unintended_high_constant(4), 1.443146596303145) < 1e-12);
        CHECK(oracle::rel(asym_unintended_high_constant(8), 1.9181471788855144) < 1e-12);
        CHECK(oracle::rel(asym_unintended_high_constant(16), 2.3189058526224421) < 1e-12);

        // The U^2/(M-1) proportionality holds once the M-dependent constant is divided out.
        const double r = asym_unintended_high(at(30.0, 4, 2)) / asym_unintended_high(at(30.0, 2, 2));
        const double s = asym_unintended_high_constant(8) / asym_unintended_high_constant(4);
        CHECK(r / s == doctest::Approx(12.0 / 7.0).epsilon(1e-12));

        const auto p = at(30.0, 2, 2);
        const double ratio = asym_unintended_high(p) / nmse_unintended_closed(p);
        MESSAGE("asymptote over closed form at U=2 N_T=2 30dB: ", ratio);
        CHECK(ratio >= 0.5);
        CHECK(ratio <= 2.0);
        CHECK(oracle::rel(asym_unintended_high_incomplete(p), 0.0078253702443005498) < 1e-9);
        CHECK(oracle::rel(asym_unintended_high_incomplete(p), nmse_unintended_closed(p)) < 0.05);

        auto p2 = p;
        p2.gamma *= 3.0;
        CHECK(asym_unintended_high(p2) == doctest::Approx(asym_unintended_high(p) / 3.0).epsilon(1e-14));
        CHECK_THROWS_AS(asym_unintended_high(at(30.0, 1, 1)), DomainError);
        CHECK_THROWS_AS(asym_unintended_high_incomplete(at(30.0, 1, 1)), DomainError);
    }

    TEST_CASE("grid-wide properties")
    {
        for (int u : {1, 2, 4})
            for (double snr : {0.0, 10.0, 20.0, 30.0})
            {
                double prev = 2.0;
                for (int nt : {1, 2, 4})
                {
                    const double v = nmse_intended_closed(at(snr, u, nt));
                    CHECK(v <= prev);
                    CHECK(v > 0.0);
                    CHECK(v <= 1.0);
                    prev = v;
                    const double w = nmse_unintended_closed(at(snr, u, nt));
                    CHECK(w > 0.0);
                    CHECK(w <= 1.0);
                }
            }
        double prev = 0.0;
        for (int u : {1, 2, 4, 8})
        {
            const double v = nmse_unintended_closed(at(30.0, u, 2));
            CHECK(v > prev);
            prev = v;
        }
        CHECK(nmse_unintended_closed(at(30.0, 1, 1)) < nmse_intended_closed(at(30.0, 1, 1)));
    }

    TEST_CASE("SNR root finding")
    {
        auto curve = [](int u, int nt) {
            return [u, nt](double s) { return nmse_intended_closed(at(s, u, nt)); };
        };
        const double s1 = solve_snr_db_for_nmse(curve(2, 1), 0.01);
        const double s2 = solve_snr_db_for_nmse(curve(2, 2), 0.01);
        CHECK(nmse_intended_closed(at(s2, 2, 2)) == doctest::Approx(0.01).epsilon(1e-5));
        MESSAGE("N_T gap at U=2: ", s1 - s2);
        CHECK(s1 - s2 == doctest::Approx(12.0).epsilon(0.125));
        CHECK_THROWS_AS(solve_snr_db_for_nmse(curve(2, 2), 0.01, 40.0, 80.0), DomainError);
        CHECK_THROWS_AS(solve_snr_db_for_nmse(curve(2, 2), -1.0), DomainError);
    }
}
