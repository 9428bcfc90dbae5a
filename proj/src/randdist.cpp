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

#include "trofdm/randdist.hpp"
#include "trofdm/quadrature.hpp"
#include "trofdm/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace trofdm::randdist
{
    void ProductSumParams::validate() const
    {
        if (terms < 1)
            throw ConfigError("ProductSumParams: M must be >= 1");
        if (!(sigma1 > 0.0) || !(sigma2 > 0.0) || !std::isfinite(sigma1) || !std::isfinite(sigma2))
            throw ConfigError("ProductSumParams: standard deviations must be positive and finite");
    }

    double pdf_gamma_sum(double z, int terms)
    {
        if (terms < 1)
            throw DomainError("pdf_gamma_sum: M must be >= 1");
        if (!(z >= 0.0))
            throw DomainError("pdf_gamma_sum: requires z >= 0");
        if (z == 0.0)
            return terms == 1 ? 1.0 : 0.0;
        return std::exp((terms - 1) * std::log(z) - z - std::lgamma(static_cast<double>(terms)));
    }

    double pdf_abs_product_sum(double r, const ProductSumParams &params)
    {
        params.validate();
        if (!(r >= 0.0))
            throw DomainError("pdf_abs_product_sum: requires r >= 0");
        if (r == 0.0)
        {
            if (params.terms == 1)
                throw SingularityError("pdf_abs_product_sum: density diverges at r = 0 for M = 1");
            return 0.0;
        }
        const double s = params.sigma1 * params.sigma2;
        const double m = params.terms;
        const double z = r / s;
        const double log_norm = std::log(4.0) - std::lgamma(m) - std::log(s);
        // Below 1e-8 use the leading small-argument term of z^M K_{M-1}(2z), which
        // avoids overflowing K for large orders.
        if (z < 1e-8)
        {
            const double lead = params.terms == 1 ? -z * (std::log(z) + std::numbers::egamma)
                                                  : 0.5 * std::tgamma(m - 1.0) * z;
            return std::exp(log_norm) * lead;
        }
        return std::exp(log_norm + m * std::log(z) + specfun::log_bessel_k_ref(params.terms - 1, 2.0 * z));
    }

    double mass_abs_product_sum(double lo, double hi, const ProductSumParams &params)
    {
        params.validate();
        if (!(lo >= 0.0) || hi < lo)
            throw DomainError("mass_abs_product_sum: requires 0 <= lo <= hi");
        auto f = [&](double r) { return r > 0.0 ? pdf_abs_product_sum(r, params) : 0.0; };
        if (lo == 0.0)
            return quad::tanh_sinh(f, lo, hi, 1e-10);
        return quad::gauss_kronrod(f, lo, hi, 1e-11);
    }

    ProductSumCdf::ProductSumCdf(const ProductSumParams &params, int grid_points)
    {
        params.validate();
        if (grid_points < 16)
            throw ConfigError("ProductSumCdf: need at least 16 grid points");
        const double s = params.sigma1 * params.sigma2;
        // f(r) ~ r^(M-1/2) e^(-2r/s) for large r; beyond r_max the tail is < 1e-15
        const double r_min = 1e-7 * s;
        const double r_max = s * (25.0 + 2.0 * params.terms);
        r_.resize(grid_points + 1);
        cdf_.resize(grid_points + 1);
        r_[0] = 0.0;
        cdf_[0] = 0.0;
        const double ratio = std::log(r_max / r_min) / (grid_points - 1);
        for (int i = 1; i <= grid_points; ++i)
            r_[i] = r_min * std::exp(ratio * (i - 1));
        for (int i = 1; i <= grid_points; ++i)
            cdf_[i] = cdf_[i - 1] + mass_abs_product_sum(r_[i - 1], r_[i], params);
    }

    double ProductSumCdf::operator()(double r) const
    {
        if (r <= 0.0)
            return 0.0;
        if (r >= r_.back())
            return cdf_.back();
        const auto it = std::upper_bound(r_.begin(), r_.end(), r);
        const std::size_t i = static_cast<std::size_t>(it - r_.begin());
        const double w = (r - r_[i - 1]) / (r_[i] - r_[i - 1]);
        return cdf_[i - 1] + w * (cdf_[i] - cdf_[i - 1]);
    }

    cplx sample_product_sum_complex(const ProductSumParams &params, Rng &rng)
    {
        const double v1 = params.sigma1 * params.sigma1;
        const double v2 = params.sigma2 * params.sigma2;
        cplx z{0.0, 0.0};
        for (int m = 0; m < params.terms; ++m)
        {
            const cplx y1 = complex_gaussian(rng, v1);
            const cplx y2 = complex_gaussian(rng, v2);
            z += y1 * y2;
        }
        return z;
    }

    double sample_product_sum(const ProductSumParams &params, Rng &rng)
    {
        return std::abs(sample_product_sum_complex(params, rng));
    }

    double analytic_cf(const ProductSumParams &params, double omega1, double omega2)
    {
        params.validate();
        const double s2 = params.sigma1 * params.sigma1 * params.sigma2 * params.sigma2;
        return std::pow(1.0 + s2 * (omega1 * omega1 + omega2 * omega2) / 4.0, -params.terms);
    }

    CfComparison empirical_cf_check(const ProductSumParams &params, double omega1, double omega2,
                                    long n_samples, Rng &rng)
    {
        params.validate();
        if (n_samples < 10000)
            throw ConfigError("empirical_cf_check: needs at least 10^4 samples, got " + std::to_string(n_samples));
        KahanSum re, im;
        for (long i = 0; i < n_samples; ++i)
        {
            const cplx z = sample_product_sum_complex(params, rng);
            const double phase = omega1 * z.real() + omega2 * z.imag();
            re.add(std::cos(phase));
            im.add(std::sin(phase));
        }
        const double n = static_cast<double>(n_samples);
        return {cplx(re.sum / n, im.sum / n), cplx(analytic_cf(params, omega1, omega2), 0.0)};
    }

    double ks_distance(std::span<double> samples, const std::function<double(double)> &cdf)
    {
        if (samples.empty())
            throw ConfigError("ks_distance: no samples");
        std::sort(samples.begin(), samples.end());
        const double n = static_cast<double>(samples.size());
        double d = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i)
        {
            const double f = cdf(samples[i]);
            d = std::max(d, std::max(std::abs((i + 1) / n - f), std::abs(f - i / n)));
        }
        return d;
    }
}
