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

#include <functional>

namespace trofdm::quad
{
    using Integrand = std::function<double(double)>;

    /// Adaptive 61-point Gauss-Kronrod on a finite interval with a smooth integrand.
    double gauss_kronrod(const Integrand &f, double a, double b, double rel_tol = 1e-12);

    /// Double-exponential (tanh-sinh) rule on a finite interval; tolerates integrable
    /// endpoint singularities such as log(x) or x^(-1/2).
    double tanh_sinh(const Integrand &f, double a, double b, double rel_tol = 1e-12);

    /// Double-exponential (exp-sinh) rule on [a, inf) for decaying integrands.
    double exp_sinh(const Integrand &f, double a, double rel_tol = 1e-12);
}
