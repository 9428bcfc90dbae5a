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

#include <memory>

namespace trofdm
{
    /// Unitary DFT of a fixed length backed by FFTW. forward(x)_q = Q^(-1/2) sum_n x_n e^(-j2pi qn/Q),
    /// inverse is its adjoint. Plans are created under a global lock; an instance is not
    /// meant to be shared between threads.
    class UnitaryFft
    {
    public:
        explicit UnitaryFft(int size);
        ~UnitaryFft();
        UnitaryFft(const UnitaryFft &) = delete;
        UnitaryFft &operator=(const UnitaryFft &) = delete;

        int size() const { return size_; }
        CVec forward(const CVec &in);
        CVec inverse(const CVec &in);

    private:
        struct Impl;
        int size_;
        std::unique_ptr<Impl> impl_;
    };
}
