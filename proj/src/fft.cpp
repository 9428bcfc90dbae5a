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

#include "trofdm/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>

namespace trofdm
{
    namespace
    {
        std::mutex &planner_mutex()
        {
            static std::mutex m;
            return m;
        }
    }

    struct UnitaryFft::Impl
    {
        fftw_complex *buf = nullptr;
        fftw_plan fwd = nullptr;
        fftw_plan inv = nullptr;
    };

    UnitaryFft::UnitaryFft(int size) : size_(size), impl_(std::make_unique<Impl>())
    {
        if (size < 1)
            throw ConfigError("UnitaryFft: size must be positive");
        std::lock_guard<std::mutex> lock(planner_mutex());
        impl_->buf = fftw_alloc_complex(static_cast<std::size_t>(size));
        impl_->fwd = fftw_plan_dft_1d(size, impl_->buf, impl_->buf, FFTW_FORWARD, FFTW_ESTIMATE);
        impl_->inv = fftw_plan_dft_1d(size, impl_->buf, impl_->buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }

    UnitaryFft::~UnitaryFft()
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(impl_->fwd);
        fftw_destroy_plan(impl_->inv);
        fftw_free(impl_->buf);
    }

    namespace
    {
        CVec run(fftw_plan plan, fftw_complex *buf, const CVec &in, int size)
        {
            if (static_cast<int>(in.size()) != size)
                throw ConfigError("UnitaryFft: input length does not match transform size");
            static_assert(sizeof(cplx) == sizeof(fftw_complex));
            std::memcpy(buf, in.data(), sizeof(fftw_complex) * size);
            fftw_execute(plan);
            CVec out(size);
            const double scale = 1.0 / std::sqrt(static_cast<double>(size));
            for (int i = 0; i < size; ++i)
                out[i] = cplx(buf[i][0], buf[i][1]) * scale;
            return out;
        }
    }

    CVec UnitaryFft::forward(const CVec &in) { return run(impl_->fwd, impl_->buf, in, size_); }
    CVec UnitaryFft::inverse(const CVec &in) { return run(impl_->inv, impl_->buf, in, size_); }
}
