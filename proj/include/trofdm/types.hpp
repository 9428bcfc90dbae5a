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

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace trofdm
{
    using cplx = std::complex<double>;
    using CVec = std::vector<cplx>;

    // Argument outside the mathematical domain of a function
    struct DomainError : std::domain_error
    {
        using std::domain_error::domain_error;
    };

    // Point where a density or integrand is singular and has no finite value
    struct SingularityError : std::domain_error
    {
        using std::domain_error::domain_error;
    };

    // Inconsistent or unsupported link / experiment parameters
    struct ConfigError : std::invalid_argument
    {
        using std::invalid_argument::invalid_argument;
    };

    struct IoError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    using Rng = std::mt19937_64;

    constexpr std::uint64_t splitmix64(std::uint64_t x)
    {
        x += 0x9E3779B97F4A7C15ull;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        return x ^ (x >> 31);
    }

    /// Independent generator for stream `stream` of a master seed. Monte-Carlo trial i
    /// always uses derive_rng(seed, i), so results do not depend on scheduling.
    inline Rng derive_rng(std::uint64_t master, std::uint64_t stream)
    {
        return Rng(splitmix64(splitmix64(master) ^ splitmix64(stream + 0x632BE59BD9B4E019ull)));
    }

    /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    inline cplx complex_gaussian(Rng &rng, double variance)
    {
        std::normal_distribution<double> n(0.0, std::sqrt(variance / 2.0));
        const double re = n(rng);
        const double im = n(rng);
        return {re, im};
    }

    /// Compensated summation. Accumulating in a fixed order gives results that are
    /// reproducible to the last bit.
    struct KahanSum
    {
        double sum = 0.0;
        double comp = 0.0;

        void add(double v)
        {
            const double y = v - comp;
            const double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
    };

    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
    inline double linear_to_db(double v) { return 10.0 * std::log10(v); }
}
