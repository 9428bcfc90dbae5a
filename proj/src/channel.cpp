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

#include "trofdm/channel.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace trofdm::channel
{
    using nlohmann::json;

    void PowerDelayProfile::validate() const
    {
        if (taps.empty())
            throw ConfigError("PDP '" + name + "': needs at least one tap");
        if (taps.front().delay_ns != 0.0)
            throw ConfigError("PDP '" + name + "': first tap delay must be 0 ns");
        double max_db = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < taps.size(); ++i)
        {
            if (!std::isfinite(taps[i].delay_ns) || !std::isfinite(taps[i].power_db))
                throw ConfigError("PDP '" + name + "': non-finite tap");
            if (i > 0 && !(taps[i].delay_ns > taps[i - 1].delay_ns))
                throw ConfigError("PDP '" + name + "': delays must be strictly increasing");
            if (taps[i].power_db > 1e-12)
                throw ConfigError("PDP '" + name + "': relative powers must be <= 0 dB");
            max_db = std::max(max_db, taps[i].power_db);
        }
        if (std::abs(max_db) > 1e-12)
            throw ConfigError("PDP '" + name + "': strongest tap must be 0 dB");
    }

    PowerDelayProfile PowerDelayProfile::epa()
    {
        return {"EPA",
                {{0.0, 0.0}, {30.0, -1.0}, {70.0, -2.0}, {90.0, -3.0}, {110.0, -8.0}, {190.0, -17.2}, {410.0, -20.8}}};
    }

    PowerDelayProfile PowerDelayProfile::from_json_text(const std::string &text)
    {
        PowerDelayProfile pdp;
        try
        {
            const json j = json::parse(text);
            pdp.name = j.value("name", std::string("custom"));
            for (const auto &t : j.at("taps"))
                pdp.taps.push_back({t.at("delay_ns").get<double>(), t.at("power_db").get<double>()});
        }
        catch (const json::exception &e)
        {
            throw ConfigError(std::string("PDP file: ") + e.what());
        }
        pdp.validate();
        return pdp;
    }

    PowerDelayProfile PowerDelayProfile::load(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw IoError("cannot open PDP file '" + path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        return from_json_text(ss.str());
    }

    PowerDelayProfile PowerDelayProfile::from_name_or_path(const std::string &spec)
    {
        std::string lower = spec;
        std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
        if (lower == "epa")
            return epa();
        return load(spec);
    }

    std::string PowerDelayProfile::to_json_text() const
    {
        json j;
        j["name"] = name;
        j["taps"] = json::array();
        for (const auto &t : taps)
            j["taps"].push_back({{"delay_ns", t.delay_ns}, {"power_db", t.power_db}});
        return j.dump();
    }

    void SamplingGrid::validate() const
    {
        if (!(sample_period_ns > 0.0) || !std::isfinite(sample_period_ns))
            throw ConfigError("SamplingGrid: sample period must be positive");
        if (n_subcarriers < 1 || (n_subcarriers & (n_subcarriers - 1)) != 0)
            throw ConfigError("SamplingGrid: Q must be a power of two, got " + std::to_string(n_subcarriers));
        if (cp_length < 0)
            throw ConfigError("SamplingGrid: cyclic prefix length must be non-negative");
    }

    std::string to_string(Normalization mode)
    {
        return mode == Normalization::PerRealization ? "per-realization" : "in-expectation";
    }

    Normalization normalization_from_string(const std::string &s)
    {
        if (s == "per-realization")
            return Normalization::PerRealization;
        if (s == "in-expectation")
            return Normalization::InExpectation;
        throw ConfigError("unknown normalization mode '" + s + "' (per-realization | in-expectation)");
    }

    TapMap map_pdp_to_taps(const PowerDelayProfile &pdp, const SamplingGrid &grid)
    {
        pdp.validate();
        grid.validate();
        std::map<int, double> power_at;
        for (const auto &t : pdp.taps)
        {
            const int idx = static_cast<int>(std::lround(t.delay_ns / grid.sample_period_ns));
            power_at[idx] += std::pow(10.0, t.power_db / 10.0);
        }
        TapMap out;
        double total = 0.0;
        for (const auto &[idx, p] : power_at)
        {
            out.indices.push_back(idx);
            out.variances.push_back(p);
            total += p;
        }
        for (auto &v : out.variances)
            v /= total;
        if (out.max_index() >= grid.n_subcarriers)
            throw ConfigError("PDP '" + pdp.name + "' spans " + std::to_string(out.max_index() + 1) +
                              " samples, longer than the OFDM symbol (Q = " + std::to_string(grid.n_subcarriers) + ")");
        return out;
    }

    ChannelRealization realize(const TapMap &taps, int n_antennas, Normalization mode, Rng &rng)
    {
        if (n_antennas < 1)
            throw ConfigError("realize: need at least one antenna");
        ChannelRealization out;
        out.mode = mode;
        out.cirs.assign(n_antennas, CVec(taps.max_index() + 1, cplx{0.0, 0.0}));
        for (auto &h : out.cirs)
        {
            double energy = 0.0;
            for (std::size_t i = 0; i < taps.indices.size(); ++i)
            {
                const cplx v = complex_gaussian(rng, taps.variances[i]);
                h[taps.indices[i]] = v;
                energy += std::norm(v);
            }
            if (mode == Normalization::PerRealization)
            {
                const double scale = 1.0 / std::sqrt(energy);
                for (auto &v : h)
                    v *= scale;
            }
        }
        return out;
    }

    ChannelRealization realize(const PowerDelayProfile &pdp, const SamplingGrid &grid, int n_antennas,
                               Normalization mode, Rng &rng)
    {
        return realize(map_pdp_to_taps(pdp, grid), n_antennas, mode, rng);
    }

    std::pair<ChannelRealization, ChannelRealization> realize_pair(const TapMap &taps, int n_antennas,
                                                                   Normalization mode, Rng &rng)
    {
        const std::uint64_t s1 = rng();
        const std::uint64_t s2 = rng();
        Rng r1 = derive_rng(s1, 0);
        Rng r2 = derive_rng(s2, 1);
        auto intended = realize(taps, n_antennas, mode, r1);
        auto unintended = realize(taps, n_antennas, mode, r2);
        return {std::move(intended), std::move(unintended)};
    }

    std::pair<ChannelRealization, ChannelRealization> realize_pair(const PowerDelayProfile &pdp,
                                                                   const SamplingGrid &grid, int n_antennas,
                                                                   Normalization mode, Rng &rng)
    {
        return realize_pair(map_pdp_to_taps(pdp, grid), n_antennas, mode, rng);
    }

    Cfr cfr(const ChannelRealization &realization, int n_subcarriers, DftSign sign)
    {
        const int q_len = n_subcarriers;
        // twiddle[k] = exp(-j 2 pi k / Q); exponents reduced mod Q exactly
        CVec twiddle(q_len);
        const double dir = sign == DftSign::Forward ? -1.0 : 1.0;
        for (int k = 0; k < q_len; ++k)
            twiddle[k] = std::polar(1.0, dir * 2.0 * std::numbers::pi * k / q_len);

        Cfr out;
        out.values.reserve(realization.cirs.size());
        for (const auto &h : realization.cirs)
        {
            if (static_cast<int>(h.size()) > q_len)
                throw ConfigError("cfr: CIR longer than Q");
            CVec values(q_len, cplx{0.0, 0.0});
            for (int l = 0; l < static_cast<int>(h.size()); ++l)
            {
                if (h[l] == cplx{0.0, 0.0})
                    continue;
                for (int q = 0; q < q_len; ++q)
                    values[q] += h[l] * twiddle[(static_cast<long>(q) * l) % q_len];
            }
            out.values.push_back(std::move(values));
        }
        return out;
    }

    Cfr cfr(const ChannelRealization &realization, const SamplingGrid &grid, DftSign sign)
    {
        grid.validate();
        return cfr(realization, grid.n_subcarriers, sign);
    }
}
