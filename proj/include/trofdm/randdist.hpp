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

#include "trofdm/types.hpp"

#include <functional>
#include <span>
#include <vector>

namespace trofdm::randdist
{
    /// Z = sum_{m<M} Y1_m Y2_m with Y1_m ~ CN(0, sigma1^2), Y2_m ~ CN(0, sigma2^2), all independent.
    struct ProductSumParams
    {
        int terms = 1; // M
        double sigma1 = 1.0;
        double sigma2 = 1.0;

        void validate() const;
    };

    /// Gamma(M, 1) density z^(M-1) e^(-z) / (M-1)!, the law of sum of M unit-mean
    /// exponential variables.
    double pdf_gamma_sum(double z, int terms);

    /// Density of |Z|:
    ///     f(r) = 4 r^M / (Gamma(M) (s1 s2)^(M+1)) K_{M-1}(2 r / (s1 s2))
    /// evaluated with the quadrature Bessel reference. At r = 0 the density is 0 for
    /// M >= 2 and logarithmically divergent for M = 1 (SingularityError).
    double pdf_abs_product_sum(double r, const ProductSumParams &params);

    /// Probability mass of |Z| on [lo, hi], integrable through the M = 1 singularity.
    double mass_abs_product_sum(double lo, double hi, const ProductSumParams &params);

    /// CDF of |Z| tabulated by quadrature on a log-spaced grid and linearly interpolated.
    class ProductSumCdf
    {
    public:
        explicit ProductSumCdf(const ProductSumParams &params, int grid_points = 800);

        double operator()(double r) const;
        /// Total mass captured by the table; 1 up to quadrature error.
        double total_mass() const { return cdf_.back(); }

    private:
        std::vector<double> r_;
        std::vector<double> cdf_;
    };

    /// One complex draw of Z (before taking the modulus).
    cplx sample_product_sum_complex(const ProductSumParams &params, Rng &rng);

    /// One draw of |Z|.
    double sample_product_sum(const ProductSumParams &params, Rng &rng);

    struct CfComparison
    {
        cplx empirical;
        cplx analytic;
    };

    /// Empirical characteristic function E[exp(j(w1 Re Z + w2 Im Z))] against the
    /// closed form (1 + s1^2 s2^2 (w1^2 + w2^2) / 4)^(-M). Requires n_samples >= 1e4.
    CfComparison empirical_cf_check(const ProductSumParams &params, double omega1, double omega2,
                                    long n_samples, Rng &rng);

    /// Closed-form characteristic function of Z at (w1, w2).
    double analytic_cf(const ProductSumParams &params, double omega1, double omega2);

    /// Kolmogorov-Smirnov distance sup |F_n - F| between the empirical CDF of `samples`
    /// and `cdf`. The samples are sorted in place.
    double ks_distance(std::span<double> samples, const std::function<double(double)> &cdf);
}
