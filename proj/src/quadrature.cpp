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

#include "trofdm/quadrature.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <limits>

namespace trofdm::quad
{
    double gauss_kronrod(const Integrand &f, double a, double b, double rel_tol)
    {
        if (a == b)
            return 0.0;
        // Integrate over [0, 1] in the rescaled variable. The Boost error estimate does not
        // shrink with the interval width, so a narrow [a, b] far from the origin would
        // otherwise never meet a tight tolerance.
        const double width = b - a;
        auto unit = [&](double u) { return f(a + width * u); };
        double err = 0.0;
        return width * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(unit, 0.0, 1.0, 20, rel_tol, &err);
    }

    double tanh_sinh(const Integrand &f, double a, double b, double rel_tol)
    {
        if (a == b)
            return 0.0;
        // integrator construction builds abscissa tables; one per thread
        thread_local boost::math::quadrature::tanh_sinh<double> integrator;
        return integrator.integrate(f, a, b, rel_tol);
    }

    double exp_sinh(const Integrand &f, double a, double rel_tol)
    {
        thread_local boost::math::quadrature::exp_sinh<double> integrator;
        return integrator.integrate(f, a, std::numeric_limits<double>::infinity(), rel_tol);
    }
}
