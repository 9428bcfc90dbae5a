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
#include "trofdm/experiment.hpp"
#include "trofdm/fft.hpp"
#include "trofdm/randdist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace trofdm::experiment
{
    namespace
    {
        struct Recorder
        {
            ValidationReport &report;

            void bound(const std::string &name, double measured, double tolerance, std::string detail = {})
            {
                const bool ok = std::isfinite(measured) && measured <= tolerance;
                report.checks.push_back({name, measured, tolerance, ok ? CheckStatus::Pass : CheckStatus::Fail,
                                         std::move(detail)});
            }

            void info(const std::string &name, double measured, std::string detail = {})
            {
                report.checks.push_back({name, measured, std::nan(""), CheckStatus::Info, std::move(detail)});
            }
        };

        double rel(double a, double b)
        {
            return std::abs(a - b) / std::abs(b);
        }

        std::string point_label(int u, int nt, double snr_db)
        {
            return "U=" + std::to_string(u) + " N_T=" + std::to_string(nt) + " SNR=" + format_double(snr_db) + "dB";
        }

        // Frequency response through the FFT module rather than the channel module's direct
        // DFT, so a sign error in either one shows up as a mismatch.
        channel::Cfr cfr_by_fft(const channel::ChannelRealization &r, int q)
        {
            UnitaryFft fft(q);
            channel::Cfr out;
            for (const auto &h : r.cirs)
            {
                CVec padded(q, cplx(0.0, 0.0));
                std::copy(h.begin(), h.end(), padded.begin());
                CVec f = fft.forward(padded);
                for (auto &v : f)
                    v *= std::sqrt(static_cast<double>(q));
                out.values.push_back(std::move(f));
            }
            return out;
        }

        channel::DftSign fault_sign(const ExperimentSpec &spec)
        {
            return spec.fault == Fault::DftSign ? channel::DftSign::Reversed : channel::DftSign::Forward;
        }

        void structural_checks(const ExperimentSpec &spec, Recorder &rec)
        {
            // Dense spreading algebra on a short grid with an 8-tap uniform channel.
            const int q = 32;
            const int u = 4;
            const int n = q / u;
            const int n_tx = 2;
            Rng rng = derive_rng(spec.seed, 1001);
            const auto code = link::build_spreading(n, u, rng);
            const auto s = code.dense();

            double unitary_err = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                {
                    double acc = 0.0;
                    for (int r = 0; r < q; ++r)
                        acc += s[r * n + i] * s[r * n + j];
                    unitary_err = std::max(unitary_err, std::abs(acc - (i == j ? 1.0 : 0.0)));
                }
            rec.bound("spreading.unitarity", unitary_err, 1e-15, "max |S^H S - I|, Q=32 U=4");

            channel::TapMap taps;
            for (int l = 0; l < 8; ++l)
            {
                taps.indices.push_back(l);
                taps.variances.push_back(1.0 / 8);
            }
            auto [pre, act] = channel::realize_pair(taps, n_tx, channel::Normalization::InExpectation, rng);
            const auto pre_f = cfr_by_fft(pre, q);
            const auto act_f = cfr_by_fft(act, q);
            CVec lambda(q, cplx(0.0, 0.0));
            for (int k = 0; k < n_tx; ++k)
                for (int r = 0; r < q; ++r)
                    lambda[r] += act_f.values[k][r] * std::conj(pre_f.values[k][r]);

            const auto gains = link::effective_gains(channel::cfr(pre, q, fault_sign(spec)),
                                                     channel::cfr(act, q, fault_sign(spec)), u);
            double off = 0.0;
            double diag_err = 0.0;
            double diag_scale = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                {
                    cplx acc(0.0, 0.0);
                    for (int r = 0; r < q; ++r)
                        acc += s[r * n + i] * lambda[r] * s[r * n + j];
                    if (i == j)
                    {
                        diag_err = std::max(diag_err, std::abs(acc - gains.diagonal(i)));
                        diag_scale = std::max(diag_scale, std::abs(acc));
                    }
                    else
                    {
                        off = std::max(off, std::abs(acc));
                    }
                }
            rec.bound("spreading.diagonality", off, 1e-12, "max off-diagonal |S^H Lambda S|");
            rec.bound("gains.dense_oracle", diag_err / diag_scale, 1e-12, "K_n/U vs diag(S^H Lambda S), relative");

            // Full transmit chain on the configured grid and profile.
            link::SystemConfig cfg = spec.config;
            cfg.bof = 2;
            cfg.n_tx = 2;
            cfg.snr_db = 20.0;
            const auto tap_map = channel::map_pdp_to_taps(cfg.pdp, cfg.grid);
            auto [p2, a2] = channel::realize_pair(tap_map, cfg.n_tx, cfg.mode, rng);
            const auto code2 = link::build_spreading(cfg.n_symbols(), cfg.bof, rng);
            const auto x = link::qpsk_symbols(cfg.n_symbols(), rng);
            const int qq = cfg.n_subcarriers();
            const auto g2 = link::effective_gains(channel::cfr(p2, qq, fault_sign(spec)),
                                                  channel::cfr(a2, qq, fault_sign(spec)), cfg.bof);

            const auto quiet = link::full_chain_once(cfg, code2, p2, a2, x, std::nullopt);
            double worst = 0.0;
            double ref = 0.0;
            for (int i = 0; i < cfg.n_symbols(); ++i)
            {
                worst = std::max(worst, std::abs(quiet.despread[i] - g2.diagonal(i) * x[i]));
                ref = std::max(ref, std::abs(g2.diagonal(i) * x[i]));
            }
            rec.bound("chain.noiseless_vs_diagonal", worst / ref, 1e-9, "despread output vs (K_n/U) X_n, relative");

            const auto noisy = link::full_chain_once(cfg, code2, p2, a2, x, rng());
            const auto est = link::diagonal_path_once(g2, x, noisy.despread_noise, cfg.inv_gamma());
            worst = 0.0;
            ref = 0.0;
            for (int i = 0; i < cfg.n_symbols(); ++i)
            {
                worst = std::max(worst, std::abs(noisy.estimates[i] - est[i]));
                ref = std::max(ref, std::abs(est[i]));
            }
            rec.bound("chain.noisy_vs_diagonal", worst / ref, 1e-9, "equalized symbols, same noise, relative");

            link::McOptions one, many;
            one.workers = 1;
            many.workers = 4;
            const auto e1 = link::monte_carlo_nmse(cfg, link::Position::Unintended, 300, spec.seed, one);
            const auto e4 = link::monte_carlo_nmse(cfg, link::Position::Unintended, 300, spec.seed, many);
            rec.bound("mc.worker_determinism", std::abs(e1.mean_nmse - e4.mean_nmse), 0.0,
                      "mean NMSE with 1 and 4 workers must be bit-identical");

            link::McOptions full;
            full.path = link::Path::FullChain;
            full.workers = spec.workers;
            const long chain_trials = std::min<long>(spec.n_trials, 400);
            const auto fast = link::monte_carlo_nmse(cfg, link::Position::Intended, chain_trials, spec.seed);
            const auto slow = link::monte_carlo_nmse(cfg, link::Position::Intended, chain_trials, spec.seed, full);
            const double se = std::hypot(fast.ci95_halfwidth, slow.ci95_halfwidth) / 1.959963984540054;
            rec.bound("mc.full_chain_vs_fast", std::abs(fast.mean_nmse - slow.mean_nmse) / se, 3.0,
                      "gap in standard errors, U=2 N_T=2 20dB, " + std::to_string(chain_trials) + " trials");
        }

        void analytic_checks(const ExperimentSpec &spec, Recorder &rec)
        {
            const std::vector<int> grid = {1, 2, 4};
            double worst_i = 0.0, worst_u = 0.0;
            std::string where_i, where_u;
            for (int u : grid)
                for (int nt : grid)
                    for (double snr : {0.0, 10.0, 20.0, 30.0})
                    {
                        const auto p = analytic::ClosedFormParams::at_db(snr, u, nt, spec.trunc);
                        const double d = rel(analytic::nmse_intended_closed(p), analytic::nmse_intended_integral(p));
                        if (d > worst_i)
                        {
                            worst_i = d;
                            where_i = point_label(u, nt, snr);
                        }
                        if (snr > 25.0)
                            continue;
                        const double e =
                            rel(analytic::nmse_unintended_closed(p), analytic::nmse_unintended_integral(p));
                        if (e > worst_u)
                        {
                            worst_u = e;
                            where_u = point_label(u, nt, snr);
                        }
                    }
            rec.bound("intended.closed_vs_integral", worst_i, 0.15, "worst at " + where_i);
            rec.bound("unintended.closed_vs_integral", worst_u, 0.10, "worst at " + where_u);

            const auto p16 = analytic::ClosedFormParams::at_db(40.0, 16, 2, spec.trunc);
            rec.bound("intended.high_snr_limit", std::abs(p16.gamma * analytic::nmse_intended_closed(p16) - 0.25) / 0.25,
                      0.15, "gamma * NMSE at U=16 N_T=2 40dB vs 1/N_T^2");

            double low_identity = 0.0;
            for (int m : {1, 3, 8})
                for (double snr : {-10.0, 0.0, 10.0})
                {
                    const auto p = analytic::ClosedFormParams::at_db(snr, m, 1, spec.trunc);
                    const double t = m / std::sqrt(p.gamma);
                    low_identity = std::max(low_identity, rel(analytic::asym_intended_low(p),
                                                              specfun::gamma_lower(m, t) / std::tgamma(m)));
                }
            rec.bound("intended.low_snr_identity", low_identity, 1e-10, "finite sum vs Gamma_low(M, t)/(M-1)!");

            const auto p22 = analytic::ClosedFormParams::at_db(30.0, 2, 2, spec.trunc);
            const double closed22 = analytic::nmse_unintended_closed(p22);
            const double asym22 = analytic::asym_unintended_high(p22);
            rec.bound("unintended.high_snr_order", std::abs(std::log2(asym22 / closed22)), 1.0,
                      "|log2(asymptote / closed form)| at U=2 N_T=2 30dB");
            rec.info("unintended.high_snr_incomplete_ratio", analytic::asym_unintended_high_incomplete(p22) / closed22,
                     "asymptote with Gamma_up(q, t) kept, over closed form");

            const auto p11 = analytic::ClosedFormParams::at_db(30.0, 1, 1, spec.trunc);
            const double gap = analytic::nmse_intended_integral(p11) - analytic::nmse_unintended_integral(p11);
            rec.bound("focusing.unintended_below_intended_1x1", -gap, 0.0,
                      "unintended minus intended NMSE at U=N_T=1 30dB");
            for (double snr : {0.0, 10.0, 20.0})
            {
                const auto p = analytic::ClosedFormParams::at_db(snr, 1, 1, spec.trunc);
                rec.info("focusing.gap_1x1_db_at_" + format_double(snr),
                         linear_to_db(analytic::nmse_intended_integral(p)) -
                             linear_to_db(analytic::nmse_unintended_integral(p)),
                         "intended minus unintended NMSE in dB");
            }
        }

        void monte_carlo_checks(const ExperimentSpec &spec, Recorder &rec)
        {
            link::SystemConfig cfg = spec.config;
            cfg.mode = channel::Normalization::InExpectation;
            link::McOptions opts;
            opts.workers = spec.workers;
            opts.dft_sign = fault_sign(spec);
            const std::vector<double> snrs = {0.0, 10.0, 20.0};
            for (auto pos : {link::Position::Intended, link::Position::Unintended})
            {
                double worst = 0.0;
                std::string where;
                for (int u : {1, 2})
                    for (int nt : {1, 2})
                    {
                        cfg.bof = u;
                        cfg.n_tx = nt;
                        const auto est = link::monte_carlo_nmse_sweep(cfg, pos, snrs, spec.n_trials, spec.seed, opts);
                        for (std::size_t i = 0; i < snrs.size(); ++i)
                        {
                            const auto p = analytic::ClosedFormParams::at_db(snrs[i], u, nt, spec.trunc);
                            const double oracle = pos == link::Position::Intended
                                                      ? analytic::nmse_intended_integral(p)
                                                      : analytic::nmse_unintended_integral(p);
                            const double sigma = est[i].ci95_halfwidth / 1.959963984540054;
                            const double z = std::abs(est[i].mean_nmse - oracle) / std::hypot(sigma, 0.05 * oracle);
                            if (z > worst)
                            {
                                worst = z;
                                where = point_label(u, nt, snrs[i]);
                            }
                        }
                    }
                rec.bound(link::to_string(pos) + ".mc_vs_integral", worst, 3.0,
                          "gap over hypot(standard error, 5% of oracle), worst at " + where);
            }
        }

        void distribution_checks(const ExperimentSpec &spec, Recorder &rec)
        {
            std::uint64_t stream = 2001;
            for (auto [s1, s2, label] : {std::tuple{0.6, 1.4, "M=5 s1=0.6 s2=1.4"}, std::tuple{1.0, 1.0, "M=5 s1=1 s2=1"}})
            {
                const randdist::ProductSumParams params{5, s1, s2};
                const std::string tag = label;
                const randdist::ProductSumCdf cdf(params);
                rec.bound("pdf.normalization " + tag, std::abs(cdf.total_mass() - 1.0), 1e-6);
                Rng rng = derive_rng(spec.seed, stream++);
                std::vector<double> samples(20000);
                for (auto &r : samples)
                    r = randdist::sample_product_sum(params, rng);
                rec.bound("pdf.ks " + tag, randdist::ks_distance(samples, [&](double r) { return cdf(r); }), 0.02,
                          "20000 samples");
            }
            const randdist::ProductSumParams params{5, 0.6, 1.4};
            double worst = 0.0;
            for (auto [w1, w2] : {std::pair{0.5, 0.0}, std::pair{1.0, 1.0}, std::pair{3.0, 2.0}})
            {
                Rng rng = derive_rng(spec.seed, 3001);
                const long n = 20000;
                const auto cf = randdist::empirical_cf_check(params, w1, w2, n, rng);
                worst = std::max(worst, std::abs(cf.empirical - cf.analytic) * std::sqrt(static_cast<double>(n)));
            }
            rec.bound("pdf.characteristic_function", worst, 5.0, "gap in units of 1/sqrt(n)");
        }

        void special_function_checks(Recorder &rec)
        {
            double worst = 0.0;
            for (int a = 1; a <= 20; ++a)
                for (double t : {0.1, 1.0, 10.0})
                    worst = std::max(worst, rel(specfun::gamma_lower(a, t) + specfun::gamma_upper(a, t),
                                                std::tgamma(static_cast<double>(a))));
            rec.bound("specfun.gamma_split", worst, 1e-9, "Gamma_low + Gamma_up = Gamma");

            worst = 0.0;
            for (double a = -5.0; a <= 5.0; a += 0.25)
                for (double t : {0.5, 2.0})
                    worst = std::max(worst, rel(a * specfun::gamma_upper(a, t) + std::pow(t, a) * std::exp(-t),
                                                specfun::gamma_upper(a + 1.0, t)));
            rec.bound("specfun.gamma_upper_recurrence", worst, 1e-9);

            worst = 0.0;
            for (int m = 1; m <= 8; ++m)
                for (double x : {0.5, 2.0, 10.0})
                    worst = std::max(worst, rel(specfun::bessel_k_ref(m + 1, x) - specfun::bessel_k_ref(m - 1, x),
                                                2.0 * m / x * specfun::bessel_k_ref(m, x)));
            rec.bound("specfun.bessel_recurrence", worst, 1e-8);

            double lah_bad = 0.0;
            for (unsigned l = 0; l <= 12; ++l)
                for (unsigned q = 1; q <= l + 1; ++q)
                    if (specfun::lah(l + 1, q) != (l + q) * specfun::lah(l, q) + specfun::lah(l, q - 1))
                        lah_bad += 1.0;
            rec.bound("specfun.lah_recurrence", lah_bad, 0.0, "count of violations for l <= 12");

            worst = 0.0;
            std::string where;
            for (int m = 1; m <= 16; ++m)
                for (double x : {0.5, 1.0, 2.0, 5.0, 10.0, 20.0})
                {
                    const double e = rel(specfun::bessel_k_series(m, x), specfun::bessel_k_ref(m, x));
                    if (e > worst)
                    {
                        worst = e;
                        where = "M=" + std::to_string(m) + " x=" + format_double(x);
                    }
                }
            rec.info("specfun.bessel_series_worst", worst, "truncated series, D=10, worst at " + where);
        }
    }

    ValidationReport run_validate(const ExperimentSpec &spec)
    {
        spec.validate();
        ValidationReport report;
        report.seed = spec.seed;
        Recorder rec{report};
        structural_checks(spec, rec);
        special_function_checks(rec);
        analytic_checks(spec, rec);
        distribution_checks(spec, rec);
        monte_carlo_checks(spec, rec);
        return report;
    }
}
