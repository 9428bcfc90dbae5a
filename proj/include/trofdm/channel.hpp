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

// Tapped-delay-line Rayleigh channels built from a power delay profile, and their
// frequency responses on the OFDM subcarrier grid.

#include "trofdm/types.hpp"

#include <string>
#include <utility>
#include <vector>

namespace trofdm::channel
{
    struct Tap
    {
        double delay_ns = 0.0;
        double power_db = 0.0;
    };

    struct PowerDelayProfile
    {
        std::string name;
        std::vector<Tap> taps;

        /// Delays strictly increasing from 0; powers <= 0 dB with a 0 dB maximum.
        void validate() const;

        /// Extended Pedestrian A.
        static PowerDelayProfile epa();

        /// Parses {"name": ..., "taps": [{"delay_ns": .., "power_db": ..}, ...]}.
        static PowerDelayProfile from_json_text(const std::string &text);
        static PowerDelayProfile load(const std::string &path);
        /// "epa" (case-insensitive) or a path to a JSON profile.
        static PowerDelayProfile from_name_or_path(const std::string &spec);

        std::string to_json_text() const;
    };

    struct SamplingGrid
    {
        double sample_period_ns = 10.0;
        int n_subcarriers = 256; // Q
        int cp_length = 64;

        void validate() const;
    };

    /// PDP delays rounded onto the sample grid. Indices are strictly increasing and the
    /// variances sum to 1.
    struct TapMap
    {
        std::vector<int> indices;
        std::vector<double> variances;

        int max_index() const { return indices.empty() ? 0 : indices.back(); }
    };

    enum class Normalization
    {
        PerRealization, // sum_l |h_l|^2 = 1 for every draw and antenna
        InExpectation   // E[sum_l |h_l|^2] = 1
    };

    std::string to_string(Normalization mode);
    Normalization normalization_from_string(const std::string &s);

    struct ChannelRealization
    {
        std::vector<CVec> cirs; // one tap vector per transmit antenna, length max_index + 1
        Normalization mode = Normalization::PerRealization;

        int n_antennas() const { return static_cast<int>(cirs.size()); }
    };

    /// Frequency response per antenna, Q values each.
    struct Cfr
    {
        std::vector<CVec> values;

        int n_antennas() const { return static_cast<int>(values.size()); }
        int size() const { return values.empty() ? 0 : static_cast<int>(values.front().size()); }
    };

    /// Rounds each delay to the nearest sample index; colliding taps have their linear
    /// powers summed. Throws ConfigError if the channel is as long as the OFDM symbol.
    TapMap map_pdp_to_taps(const PowerDelayProfile &pdp, const SamplingGrid &grid);

    ChannelRealization realize(const TapMap &taps, int n_antennas, Normalization mode, Rng &rng);
    ChannelRealization realize(const PowerDelayProfile &pdp, const SamplingGrid &grid, int n_antennas,
                               Normalization mode, Rng &rng);

    /// Realizations at the intended and at a spatially independent position, drawn from
    /// two generator streams forked off `rng`.
    std::pair<ChannelRealization, ChannelRealization> realize_pair(const TapMap &taps, int n_antennas,
                                                                   Normalization mode, Rng &rng);
    std::pair<ChannelRealization, ChannelRealization> realize_pair(const PowerDelayProfile &pdp,
                                                                   const SamplingGrid &grid, int n_antennas,
                                                                   Normalization mode, Rng &rng);

    enum class DftSign
    {
        Forward,  // H_q = sum_l h_l exp(-j 2 pi q l / Q)
        Reversed  // exp(+j ...); wrong on purpose, used by the validator's fault injection
    };

    /// Unnormalized DFT of the zero-padded CIRs on Q subcarriers.
    Cfr cfr(const ChannelRealization &realization, const SamplingGrid &grid, DftSign sign = DftSign::Forward);
    Cfr cfr(const ChannelRealization &realization, int n_subcarriers, DftSign sign = DftSign::Forward);
}
