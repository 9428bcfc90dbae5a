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

// FD/TR precoded MISO-OFDM link with rate back-off factor U.
//
// N = Q/U symbols are spread over Q subcarriers by S (U stacked +-1 diagonal blocks,
// scaled by 1/sqrt(U)), precoded on antenna k by conj(H^k), sent through the channel
// and despread. The despread channel G = S^H (sum_k Lambda_H^k Lambda_P^k) S is diagonal
// with entries K_n / U, where
//     K_n = sum_k sum_u Hact^k_{n+uN} conj(Hpre^k_{n+uN}),
// so a one-tap MMSE equalizer per symbol suffices.
//
// Two routes compute the same thing: the fast diagonal path (effective_gains,
// nmse_given_gains, diagonal_path_once) and the full IFFT / CP / convolution / FFT chain
// (full_chain_once), which serves as its oracle.

#include "trofdm/channel.hpp"
#include "trofdm/types.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace trofdm::link
{
    struct SystemConfig
    {
        int bof = 1;          // U
        int n_tx = 1;         // N_T
        double snr_db = 20.0; // gamma = sigma_X^2 / sigma_v^2 with sigma_X^2 = 1; +inf disables noise
        channel::SamplingGrid grid;
        channel::PowerDelayProfile pdp = channel::PowerDelayProfile::epa();
        channel::Normalization mode = channel::Normalization::PerRealization;

        int n_subcarriers() const { return grid.n_subcarriers; }
        int n_symbols() const { return grid.n_subcarriers / bof; }
        double gamma() const { return db_to_linear(snr_db); }
        /// sigma_v^2; 0 in the noiseless limit.
        double inv_gamma() const { return std::isinf(snr_db) && snr_db > 0 ? 0.0 : 1.0 / gamma(); }

        void validate() const;
    };

    enum class Position
    {
        Intended,
        Unintended
    };

    std::string to_string(Position p);
    Position position_from_string(const std::string &s);

    struct SpreadingCode
    {
        int bof = 1;
        int n_symbols = 1;
        std::vector<std::int8_t> signs; // signs[u * N + n] multiplies symbol n on subcarrier n + uN

        int n_subcarriers() const { return bof * n_symbols; }
        double scale() const { return 1.0 / std::sqrt(static_cast<double>(bof)); }

        /// S X, length Q.
        CVec spread(std::span<const cplx> symbols) const;
        /// S^H Y, length N.
        CVec despread(std::span<const cplx> subcarriers) const;
        /// Dense Q x N matrix, row-major.
        std::vector<double> dense() const;
    };

    SpreadingCode build_spreading(int n_symbols, int bof, Rng &rng);

    struct EffectiveGains
    {
        CVec k; // K_n, n < N
        int bof = 1;

        /// Diagonal entry of G for symbol n.
        cplx diagonal(int n) const { return k[n] / static_cast<double>(bof); }
    };

    /// K_n = sum_k sum_u actual^k_{n+uN} conj(precode^k_{n+uN}). The +-1 spreading signs
    /// square to one on the diagonal, so the code does not enter.
    EffectiveGains effective_gains(const channel::Cfr &precode, const channel::Cfr &actual, int bof);

    /// (1/N) sum_n inv_gamma / (|K_n/U|^2 + inv_gamma) for one realization.
    double nmse_given_gains(const EffectiveGains &gains, double gamma);

    /// One-tap MMSE on the diagonal model: X^_n = theta_n (g_n X_n + V'_n), theta = g* / (|g|^2 + 1/gamma).
    CVec diagonal_path_once(const EffectiveGains &gains, std::span<const cplx> symbols,
                            std::span<const cplx> despread_noise, double inv_gamma);

    struct ChainResult
    {
        CVec estimates;      // X^
        CVec errors;         // X - X^
        CVec despread;       // Y = S^H F (received) before equalization
        CVec diagonal;       // diagonal of G as seen by the receiver
        CVec time_noise;     // noise samples inside the FFT window (empty when noise is off)
        CVec despread_noise; // S^H F v
    };

    /// Spread, precode each antenna by conj(CFR of `precode`), IFFT, add CP, convolve with
    /// the CIRs of `actual`, sum antennas, add time-domain noise of variance 1/gamma, drop CP,
    /// FFT, despread, equalize. Noise is drawn from derive_rng(*noise_seed, 0) when a seed is
    /// given; otherwise the link is noiseless (the equalizer still uses cfg's gamma).
    ChainResult full_chain_once(const SystemConfig &cfg, const SpreadingCode &code,
                                const channel::ChannelRealization &precode,
                                const channel::ChannelRealization &actual, std::span<const cplx> symbols,
                                std::optional<std::uint64_t> noise_seed);

    /// Unit-modulus QPSK symbols.
    CVec qpsk_symbols(int n, Rng &rng);

    enum class Path
    {
        Fast,     // effective_gains + nmse_given_gains
        FullChain // per-symbol errors of full_chain_once
    };

    struct McOptions
    {
        Path path = Path::Fast;
        unsigned workers = 0; // 0: hardware concurrency
        channel::DftSign dft_sign = channel::DftSign::Forward;
    };

    struct NmseEstimate
    {
        double mean_nmse = 0.0;
        double ci95_halfwidth = 0.0;
        long n_trials = 0;
        double snr_db = 0.0;
        Position position = Position::Intended;
        std::uint64_t seed = 0;
        SystemConfig config;

        double relative_ci() const { return ci95_halfwidth / mean_nmse; }
    };

    /// Mean NMSE over independent channel realizations with a 95% normal-approximation
    /// confidence half-width. Trial i draws everything from derive_rng(seed, i).
    NmseEstimate monte_carlo_nmse(const SystemConfig &cfg, Position position, long n_trials, std::uint64_t seed,
                                  const McOptions &opts = {});

    /// Same realizations evaluated at every SNR in `snr_db` (fast path only).
    std::vector<NmseEstimate> monte_carlo_nmse_sweep(const SystemConfig &cfg, Position position,
                                                     std::span<const double> snr_db, long n_trials,
                                                     std::uint64_t seed, const McOptions &opts = {});

    /// Per-trial |K_n/U|^2 values, kept so NMSE can be re-evaluated at any SNR (for
    /// example when solving for the SNR that reaches a target NMSE).
    class GainSamples
    {
    public:
        static GainSamples collect(const SystemConfig &cfg, Position position, long n_trials, std::uint64_t seed,
                                   const McOptions &opts = {});

        long n_trials() const { return n_trials_; }
        int n_symbols() const { return n_symbols_; }
        std::span<const double> trial(long i) const;

        /// NMSE estimate at `snr_db` over the stored realizations.
        NmseEstimate estimate(double snr_db) const;

    private:
        long n_trials_ = 0;
        int n_symbols_ = 0;
        std::vector<double> power_; // n_trials x N
        SystemConfig config_;
        Position position_ = Position::Intended;
        std::uint64_t seed_ = 0;
    };
}
