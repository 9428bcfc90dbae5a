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

// Experiment runner behind the command-line tool. A spec is read from JSON (optional) and
// then overridden by flags; each run_* function returns a Table in deterministic order.

#include "trofdm/link.hpp"
#include "trofdm/specfun.hpp"
#include "trofdm/table.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace trofdm::experiment
{
    enum class Mode
    {
        SweepSnr,
        GridUNt,
        PdfCheck,
        Validate
    };

    enum class Format
    {
        Csv,
        Json
    };

    std::string to_string(Mode m);
    Format format_from_string(const std::string &s);

    struct PdfCheckParams
    {
        int terms = 5;
        double sigma1 = 0.6;
        double sigma2 = 1.4;
        long n_samples = 100000;
        int bins = 60;
    };

    enum class Fault
    {
        None,
        DftSign // precoder CFR computed with the wrong exponent sign
    };

    struct ExperimentSpec
    {
        Mode mode = Mode::SweepSnr;
        link::SystemConfig config;
        std::vector<double> snr_grid;
        std::vector<int> u_list;
        std::vector<int> nt_list;
        std::vector<link::Position> positions;
        long n_trials = 20000;
        std::uint64_t seed = 1;
        std::string output_path;
        Format format = Format::Csv;
        unsigned workers = 0;
        specfun::SeriesTruncation trunc;
        bool with_integral = true;
        PdfCheckParams pdf;
        Fault fault = Fault::None;

        /// Defaults for a mode: sweep 0..30 dB at U=2, N_T in {1,2,4}; grid at 30 dB over
        /// U in {1,2,4,8}, N_T in {1,2,4}; validate with 2000 trials.
        static ExperimentSpec defaults(Mode mode);

        /// Overlays the members present in a JSON object onto `base`. Unknown keys are a
        /// ConfigError so typos do not pass silently.
        static ExperimentSpec from_json_text(const std::string &text, ExperimentSpec base);
        static ExperimentSpec load(const std::string &path, ExperimentSpec base);

        void validate() const;
        std::string to_json_text() const;
    };

    /// Columns snr_db,u,n_t,position,mc_nmse,mc_ci95,closed_form,integral_oracle (linear);
    /// JSON output also carries the *_db columns.
    Table run_sweep_snr(const ExperimentSpec &spec);

    /// One SNR, every (U, N_T) of the lists: snr_db,u,n_t,position,mc_nmse,mc_ci95,closed_form.
    Table run_grid_u_nt(const ExperimentSpec &spec);

    struct PdfCheckResult
    {
        Table table; // r_lo,r_hi,r_mid,empirical_density,pdf_envelope,theory_bin_density
        double ks = 0.0;
    };

    /// Histogram of sampled |Z| against the density envelope on the same bins.
    PdfCheckResult run_pdf_check(const ExperimentSpec &spec);

    enum class CheckStatus
    {
        Pass,
        Fail,
        Info // reported, never gates the verdict
    };

    struct Check
    {
        std::string name;
        double measured = 0.0;
        double tolerance = 0.0;
        CheckStatus status = CheckStatus::Info;
        std::string detail;
    };

    struct ValidationReport
    {
        std::vector<Check> checks;
        std::uint64_t seed = 0;

        bool passed() const;
        Table table() const;
    };

    /// Runs the oracle comparisons and structural invariants at reduced trial counts.
    ValidationReport run_validate(const ExperimentSpec &spec);
}
