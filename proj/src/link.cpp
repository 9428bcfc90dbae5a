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

#include "trofdm/link.hpp"
#include "trofdm/fft.hpp"
#include "trofdm/parallel.hpp"

#include <algorithm>
#include <limits>

namespace trofdm::link
{
    void SystemConfig::validate() const
    {
        grid.validate();
        pdp.validate();
        if (bof < 1)
            throw ConfigError("rate back-off factor must be >= 1");
        if (grid.n_subcarriers % bof != 0)
            throw ConfigError("rate back-off factor " + std::to_string(bof) + " does not divide " +
                              std::to_string(grid.n_subcarriers) + " subcarriers");
        if (n_tx < 1)
            throw ConfigError("number of transmit antennas must be >= 1");
        if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity())
            throw ConfigError("SNR must be a number or +inf");
    }

    std::string to_string(Position p)
    {
        return p == Position::Intended ? "intended" : "unintended";
    }

    Position position_from_string(const std::string &s)
    {
        if (s == "intended")
            return Position::Intended;
        if (s == "unintended")
            return Position::Unintended;
        throw ConfigError("unknown position '" + s + "' (expected intended or unintended)");
    }

    CVec SpreadingCode::spread(std::span<const cplx> symbols) const
    {
        if (static_cast<int>(symbols.size()) != n_symbols)
            throw ConfigError("spread: expected " + std::to_string(n_symbols) + " symbols");
        CVec out(n_subcarriers());
        const double s = scale();
        for (int u = 0; u < bof; ++u)
            for (int n = 0; n < n_symbols; ++n)
                out[u * n_symbols + n] = s * signs[u * n_symbols + n] * symbols[n];
        return out;
    }

    CVec SpreadingCode::despread(std::span<const cplx> subcarriers) const
    {
        if (static_cast<int>(subcarriers.size()) != n_subcarriers())
            throw ConfigError("despread: expected " + std::to_string(n_subcarriers()) + " subcarriers");
        CVec out(n_symbols);
        const double s = scale();
        for (int u = 0; u < bof; ++u)
            for (int n = 0; n < n_symbols; ++n)
                out[n] += s * signs[u * n_symbols + n] * subcarriers[u * n_symbols + n];
        return out;
    }

    std::vector<double> SpreadingCode::dense() const
    {
        const int q = n_subcarriers();
        std::vector<double> m(static_cast<std::size_t>(q) * n_symbols, 0.0);
        for (int u = 0; u < bof; ++u)
            for (int n = 0; n < n_symbols; ++n)
                m[static_cast<std::size_t>(u * n_symbols + n) * n_symbols + n] = scale() * signs[u * n_symbols + n];
        return m;
    }

    SpreadingCode build_spreading(int n_symbols, int bof, Rng &rng)
    {
        if (n_symbols < 1 || bof < 1)
            throw ConfigError("spreading code needs N >= 1 and U >= 1");
        SpreadingCode code;
        code.bof = bof;
        code.n_symbols = n_symbols;
        code.signs.resize(static_cast<std::size_t>(bof) * n_symbols);
        std::bernoulli_distribution coin(0.5);
        for (auto &s : code.signs)
            s = coin(rng) ? 1 : -1;
        return code;
    }

    EffectiveGains effective_gains(const channel::Cfr &precode, const channel::Cfr &actual, int bof)
    {
        if (precode.n_antennas() != actual.n_antennas())
            throw ConfigError("precoder and channel have different antenna counts");
        if (precode.size() != actual.size())
            throw ConfigError("precoder and channel have different numbers of subcarriers");
        if (bof < 1 || actual.size() % bof != 0)
            throw ConfigError("rate back-off factor does not divide the number of subcarriers");
        const int n_sym = actual.size() / bof;
        EffectiveGains g;
        g.bof = bof;
        g.k.assign(n_sym, cplx(0.0, 0.0));
        for (int a = 0; a < actual.n_antennas(); ++a)
        {
            const auto &h = actual.values[a];
            const auto &p = precode.values[a];
            for (int u = 0; u < bof; ++u)
                for (int n = 0; n < n_sym; ++n)
                    g.k[n] += h[u * n_sym + n] * std::conj(p[u * n_sym + n]);
        }
        return g;
    }

    namespace
    {
        double nmse_from_powers(std::span<const double> power, double inv_gamma)
        {
            if (inv_gamma == 0.0)
                return 0.0;
            double acc = 0.0;
            for (double p : power)
                acc += inv_gamma / (p + inv_gamma);
            return acc / static_cast<double>(power.size());
        }

        std::vector<double> diagonal_powers(const EffectiveGains &gains)
        {
            std::vector<double> p(gains.k.size());
            for (std::size_t n = 0; n < p.size(); ++n)
                p[n] = std::norm(gains.diagonal(static_cast<int>(n)));
            return p;
        }

        cplx mmse_tap(cplx g, double inv_gamma)
        {
            const double den = std::norm(g) + inv_gamma;
            if (den == 0.0)
                throw SingularityError("zero effective gain with noiseless equalizer");
            return std::conj(g) / den;
        }
    }

    double nmse_given_gains(const EffectiveGains &gains, double gamma)
    {
        if (!(gamma > 0.0))
            throw DomainError("SNR must be positive");
        const auto p = diagonal_powers(gains);
        return nmse_from_powers(p, std::isinf(gamma) ? 0.0 : 1.0 / gamma);
    }

    CVec diagonal_path_once(const EffectiveGains &gains, std::span<const cplx> symbols,
                            std::span<const cplx> despread_noise, double inv_gamma)
    {
        const std::size_t n = gains.k.size();
        if (symbols.size() != n || (!despread_noise.empty() && despread_noise.size() != n))
            throw ConfigError("diagonal path: length mismatch");
        CVec est(n);
        for (std::size_t i = 0; i < n; ++i)
        {
            const cplx g = gains.diagonal(static_cast<int>(i));
            const cplx v = despread_noise.empty() ? cplx(0.0, 0.0) : despread_noise[i];
            est[i] = mmse_tap(g, inv_gamma) * (g * symbols[i] + v);
        }
        return est;
    }

    ChainResult full_chain_once(const SystemConfig &cfg, const SpreadingCode &code,
                                const channel::ChannelRealization &precode,
                                const channel::ChannelRealization &actual, std::span<const cplx> symbols,
                                std::optional<std::uint64_t> noise_seed)
    {
        cfg.validate();
        const int q = cfg.n_subcarriers();
        const int cp = cfg.grid.cp_length;
        if (code.n_subcarriers() != q || code.bof != cfg.bof)
            throw ConfigError("spreading code does not match the system configuration");
        if (precode.n_antennas() != cfg.n_tx || actual.n_antennas() != cfg.n_tx)
            throw ConfigError("channel antenna count does not match N_T");
        for (const auto &h : actual.cirs)
            if (static_cast<int>(h.size()) - 1 > cp)
                throw ConfigError("cyclic prefix of " + std::to_string(cp) + " samples is shorter than the channel");

        const auto pre_cfr = channel::cfr(precode, q);
        const CVec spread = code.spread(symbols);
        UnitaryFft fft(q);

        // Received samples after the CP, i.e. indices cp .. cp+q-1 of the linear convolution.
        CVec rx(q, cplx(0.0, 0.0));
        for (int a = 0; a < cfg.n_tx; ++a)
        {
            CVec freq(q);
            for (int i = 0; i < q; ++i)
                freq[i] = std::conj(pre_cfr.values[a][i]) * spread[i];
            const CVec body = fft.inverse(freq);
            CVec tx(q + cp);
            for (int i = 0; i < cp; ++i)
                tx[i] = body[q - cp + i];
            std::copy(body.begin(), body.end(), tx.begin() + cp);

            const auto &h = actual.cirs[a];
            for (int t = 0; t < q; ++t)
            {
                cplx acc(0.0, 0.0);
                for (std::size_t l = 0; l < h.size(); ++l)
                    acc += h[l] * tx[cp + t - static_cast<int>(l)];
                rx[t] += acc;
            }
        }

        ChainResult r;
        const double inv_gamma = cfg.inv_gamma();
        if (noise_seed && inv_gamma > 0.0)
        {
            Rng nrng = derive_rng(*noise_seed, 0);
            r.time_noise.resize(q);
            for (int t = 0; t < q; ++t)
            {
                r.time_noise[t] = complex_gaussian(nrng, inv_gamma);
                rx[t] += r.time_noise[t];
            }
            r.despread_noise = code.despread(fft.forward(r.time_noise));
        }
        else
        {
            r.despread_noise.assign(code.n_symbols, cplx(0.0, 0.0));
        }

        r.despread = code.despread(fft.forward(rx));
        const auto act_cfr = channel::cfr(actual, q);
        const EffectiveGains gains = effective_gains(pre_cfr, act_cfr, cfg.bof);
        r.diagonal.resize(code.n_symbols);
        r.estimates.resize(code.n_symbols);
        r.errors.resize(code.n_symbols);
        for (int n = 0; n < code.n_symbols; ++n)
        {
            r.diagonal[n] = gains.diagonal(n);
            r.estimates[n] = mmse_tap(r.diagonal[n], inv_gamma) * r.despread[n];
            r.errors[n] = symbols[n] - r.estimates[n];
        }
        return r;
    }

    CVec qpsk_symbols(int n, Rng &rng)
    {
        const double a = 1.0 / std::sqrt(2.0);
        std::bernoulli_distribution coin(0.5);
        CVec x(n);
        for (auto &v : x)
        {
            const double re = coin(rng) ? a : -a;
            const double im = coin(rng) ? a : -a;
            v = {re, im};
        }
        return x;
    }

    namespace
    {
        struct Trial
        {
            channel::ChannelRealization precode;
            channel::ChannelRealization actual;
        };

        // Channel draws come first from the trial generator so the fast path and the full
        // chain see identical realizations for the same (seed, i).
        Trial draw_trial(const channel::TapMap &taps, const SystemConfig &cfg, Position position, Rng &rng)
        {
            auto [first, second] = channel::realize_pair(taps, cfg.n_tx, cfg.mode, rng);
            if (position == Position::Intended)
                return {first, first};
            return {std::move(first), std::move(second)};
        }

        NmseEstimate summarize(const std::vector<double> &per_trial, const SystemConfig &cfg, Position position,
                               double snr_db, std::uint64_t seed)
        {
            NmseEstimate e;
            e.n_trials = static_cast<long>(per_trial.size());
            e.config = cfg;
            e.config.snr_db = snr_db;
            e.snr_db = snr_db;
            e.position = position;
            e.seed = seed;
            KahanSum s;
            for (double v : per_trial)
                s.add(v);
            e.mean_nmse = s.sum / static_cast<double>(e.n_trials);
            if (e.n_trials > 1)
            {
                KahanSum ss;
                for (double v : per_trial)
                    ss.add((v - e.mean_nmse) * (v - e.mean_nmse));
                const double var = ss.sum / static_cast<double>(e.n_trials - 1);
                e.ci95_halfwidth = 1.959963984540054 * std::sqrt(var / static_cast<double>(e.n_trials));
            }
            return e;
        }

        void check_trials(long n_trials)
        {
            if (n_trials < 1)
                throw ConfigError("number of Monte-Carlo trials must be >= 1");
        }
    }

    NmseEstimate monte_carlo_nmse(const SystemConfig &cfg, Position position, long n_trials, std::uint64_t seed,
                                  const McOptions &opts)
    {
        cfg.validate();
        check_trials(n_trials);
        if (opts.path == Path::Fast)
            return GainSamples::collect(cfg, position, n_trials, seed, opts).estimate(cfg.snr_db);

        const auto taps = channel::map_pdp_to_taps(cfg.pdp, cfg.grid);
        const int n_sym = cfg.n_symbols();
        std::vector<double> per_trial(n_trials);
        parallel_for(n_trials, opts.workers, [&](long i) {
            Rng rng = derive_rng(seed, static_cast<std::uint64_t>(i));
            const Trial t = draw_trial(taps, cfg, position, rng);
            const SpreadingCode code = build_spreading(n_sym, cfg.bof, rng);
            const CVec x = qpsk_symbols(n_sym, rng);
            const std::uint64_t noise_seed = rng();
            const ChainResult r = full_chain_once(cfg, code, t.precode, t.actual, x, noise_seed);
            double acc = 0.0;
            for (const auto &e : r.errors)
                acc += std::norm(e);
            per_trial[i] = acc / n_sym;
        });
        return summarize(per_trial, cfg, position, cfg.snr_db, seed);
    }

    std::vector<NmseEstimate> monte_carlo_nmse_sweep(const SystemConfig &cfg, Position position,
                                                     std::span<const double> snr_db, long n_trials,
                                                     std::uint64_t seed, const McOptions &opts)
    {
        if (opts.path != Path::Fast)
        {
            std::vector<NmseEstimate> out;
            for (double s : snr_db)
            {
                SystemConfig c = cfg;
                c.snr_db = s;
                out.push_back(monte_carlo_nmse(c, position, n_trials, seed, opts));
            }
            return out;
        }
        const auto samples = GainSamples::collect(cfg, position, n_trials, seed, opts);
        std::vector<NmseEstimate> out;
        out.reserve(snr_db.size());
        for (double s : snr_db)
            out.push_back(samples.estimate(s));
        return out;
    }

    GainSamples GainSamples::collect(const SystemConfig &cfg, Position position, long n_trials, std::uint64_t seed,
                                     const McOptions &opts)
    {
        cfg.validate();
        check_trials(n_trials);
        const auto taps = channel::map_pdp_to_taps(cfg.pdp, cfg.grid);
        GainSamples s;
        s.n_trials_ = n_trials;
        s.n_symbols_ = cfg.n_symbols();
        s.config_ = cfg;
        s.position_ = position;
        s.seed_ = seed;
        s.power_.resize(static_cast<std::size_t>(n_trials) * s.n_symbols_);
        const int q = cfg.n_subcarriers();
        parallel_for(n_trials, opts.workers, [&](long i) {
            Rng rng = derive_rng(seed, static_cast<std::uint64_t>(i));
            const Trial t = draw_trial(taps, cfg, position, rng);
            const auto pre = channel::cfr(t.precode, q, opts.dft_sign);
            const auto act = channel::cfr(t.actual, q);
            const auto p = diagonal_powers(effective_gains(pre, act, cfg.bof));
            std::copy(p.begin(), p.end(), s.power_.begin() + static_cast<std::ptrdiff_t>(i) * s.n_symbols_);
        });
        return s;
    }

    std::span<const double> GainSamples::trial(long i) const
    {
        return {power_.data() + static_cast<std::ptrdiff_t>(i) * n_symbols_, static_cast<std::size_t>(n_symbols_)};
    }

    NmseEstimate GainSamples::estimate(double snr_db) const
    {
        SystemConfig c = config_;
        c.snr_db = snr_db;
        const double inv_gamma = c.inv_gamma();
        std::vector<double> per_trial(n_trials_);
        for (long i = 0; i < n_trials_; ++i)
            per_trial[i] = nmse_from_powers(trial(i), inv_gamma);
        return summarize(per_trial, config_, position_, snr_db, seed_);
    }
}
