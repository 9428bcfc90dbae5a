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

// trofdm: NMSE experiments for frequency-domain time-reversal MISO-OFDM.
//
//   trofdm sweep-snr  [--snr 0,10,20] [--u 2] [--nt 1,2,4] [--position intended|unintended|both] ...
//   trofdm grid-u-nt  [--snr 30] [--u 1,2,4,8] [--nt 1,2,4] ...
//   trofdm pdf-check  [--terms 5] [--sigma1 0.6] [--sigma2 1.4] [--samples 100000] ...
//   trofdm validate   [--trials 2000] [--inject-fault dft-sign] ...
//
// Exit status: 0 success, 1 validation failure, 2 configuration error, 3 I/O error.

#include "trofdm/experiment.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

using namespace trofdm;
using namespace trofdm::experiment;

namespace
{
    struct Flags
    {
        std::string spec_path;
        std::vector<double> snr;
        std::vector<int> u;
        std::vector<int> nt;
        std::string position;
        long trials = 0;
        std::uint64_t seed = 0;
        std::string out;
        std::string format;
        std::string pdp;
        std::string mode;
        unsigned workers = 0;
        int truncation = 0;
        bool no_integral = false;
        int terms = 0;
        double sigma1 = 0.0;
        double sigma2 = 0.0;
        long samples = 0;
        int bins = 0;
        std::string fault;
    };

    void add_common(CLI::App *sub, Flags &f)
    {
        sub->add_option("--spec", f.spec_path, "JSON experiment spec; flags override its values");
        sub->add_option("--trials", f.trials, "Monte-Carlo channel realizations per point");
        sub->add_option("--seed", f.seed, "master seed");
        sub->add_option("--out", f.out, "output file (stdout when omitted)");
        sub->add_option("--format", f.format, "csv or json");
        sub->add_option("--pdp", f.pdp, "power delay profile: epa or a JSON file");
        sub->add_option("--mode", f.mode, "channel normalization: per-realization or in-expectation");
        sub->add_option("--workers", f.workers, "worker threads (0: all cores)");
        sub->add_option("--truncation", f.truncation, "Bessel series terms D");
    }

    void add_grid(CLI::App *sub, Flags &f)
    {
        sub->add_option("--snr", f.snr, "SNR values in dB")->delimiter(',');
        sub->add_option("--u", f.u, "rate back-off factors")->delimiter(',');
        sub->add_option("--nt", f.nt, "transmit antenna counts")->delimiter(',');
        sub->add_option("--position", f.position, "intended, unintended or both");
    }

    ExperimentSpec build_spec(Mode mode, const CLI::App &sub, const Flags &f)
    {
        ExperimentSpec s = ExperimentSpec::defaults(mode);
        if (!f.spec_path.empty())
            s = ExperimentSpec::load(f.spec_path, s);
        auto given = [&](const char *name) { return sub.get_option_no_throw(name) && sub.count(name) > 0; };
        if (given("--snr"))
            s.snr_grid = f.snr;
        if (given("--u"))
            s.u_list = f.u;
        if (given("--nt"))
            s.nt_list = f.nt;
        if (given("--position"))
        {
            if (f.position == "both")
                s.positions = {link::Position::Intended, link::Position::Unintended};
            else
                s.positions = {link::position_from_string(f.position)};
        }
        if (given("--trials"))
            s.n_trials = f.trials;
        if (given("--seed"))
            s.seed = f.seed;
        if (given("--out"))
            s.output_path = f.out;
        if (given("--format"))
            s.format = format_from_string(f.format);
        if (given("--pdp"))
            s.config.pdp = channel::PowerDelayProfile::from_name_or_path(f.pdp);
        if (given("--mode"))
            s.config.mode = channel::normalization_from_string(f.mode);
        if (given("--workers"))
            s.workers = f.workers;
        if (given("--truncation"))
            s.trunc.terms = f.truncation;
        if (given("--no-integral"))
            s.with_integral = !f.no_integral;
        if (given("--terms"))
            s.pdf.terms = f.terms;
        if (given("--sigma1"))
            s.pdf.sigma1 = f.sigma1;
        if (given("--sigma2"))
            s.pdf.sigma2 = f.sigma2;
        if (given("--samples"))
            s.pdf.n_samples = f.samples;
        if (given("--bins"))
            s.pdf.bins = f.bins;
        if (given("--inject-fault"))
        {
            if (f.fault != "dft-sign")
                throw ConfigError("unknown fault '" + f.fault + "' (expected dft-sign)");
            s.fault = Fault::DftSign;
        }
        s.validate();
        return s;
    }

    void emit(const ExperimentSpec &spec, const Table &t)
    {
        const std::string text = spec.format == Format::Json ? t.to_json() : t.to_csv();
        if (spec.output_path.empty())
            std::cout << text;
        else
            write_text_file(spec.output_path, text);
    }

    int run(Mode mode, const CLI::App &sub, const Flags &f)
    {
        const ExperimentSpec spec = build_spec(mode, sub, f);
        switch (mode)
        {
        case Mode::SweepSnr:
            emit(spec, run_sweep_snr(spec));
            return 0;
        case Mode::GridUNt:
            emit(spec, run_grid_u_nt(spec));
            return 0;
        case Mode::PdfCheck:
        {
            const auto r = run_pdf_check(spec);
            emit(spec, r.table);
            std::cerr << "ks_distance " << format_double(r.ks) << '\n';
            return 0;
        }
        case Mode::Validate:
        {
            const auto report = run_validate(spec);
            for (const auto &c : report.checks)
            {
                const char *st = c.status == CheckStatus::Pass ? "PASS" : c.status == CheckStatus::Fail ? "FAIL" : "INFO";
                std::cout << st << "  " << c.name << "  measured=" << format_double(c.measured);
                if (c.status != CheckStatus::Info)
                    std::cout << "  tolerance=" << format_double(c.tolerance);
                if (!c.detail.empty())
                    std::cout << "  (" << c.detail << ")";
                std::cout << '\n';
            }
            std::cout << "seed " << report.seed << "  verdict " << (report.passed() ? "pass" : "fail") << '\n';
            if (!spec.output_path.empty())
                emit(spec, report.table());
            return report.passed() ? 0 : 1;
        }
        }
        return 2;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"FD/TR MISO-OFDM NMSE experiments"};
    app.require_subcommand(1);
    Flags f;

    auto *sweep = app.add_subcommand("sweep-snr", "NMSE versus SNR for each (U, N_T)");
    add_common(sweep, f);
    add_grid(sweep, f);
    sweep->add_flag("--no-integral", f.no_integral, "skip the quadrature oracle column");

    auto *grid = app.add_subcommand("grid-u-nt", "NMSE over a (U, N_T) grid at one SNR");
    add_common(grid, f);
    add_grid(grid, f);

    auto *pdf = app.add_subcommand("pdf-check", "histogram of |sum Y1 Y2| against its density");
    add_common(pdf, f);
    pdf->add_option("--terms", f.terms, "number of summed products M");
    pdf->add_option("--sigma1", f.sigma1, "standard deviation of the first factor");
    pdf->add_option("--sigma2", f.sigma2, "standard deviation of the second factor");
    pdf->add_option("--samples", f.samples, "number of samples");
    pdf->add_option("--bins", f.bins, "histogram bins");

    auto *val = app.add_subcommand("validate", "oracle comparisons and structural invariants");
    add_common(val, f);
    val->add_option("--inject-fault", f.fault, "deliberate defect for a mutation smoke test (dft-sign)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return 2;
    }

    try
    {
        if (sweep->parsed())
            return run(Mode::SweepSnr, *sweep, f);
        if (grid->parsed())
            return run(Mode::GridUNt, *grid, f);
        if (pdf->parsed())
            return run(Mode::PdfCheck, *pdf, f);
        return run(Mode::Validate, *val, f);
    }
    catch (const IoError &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    catch (const std::invalid_argument &e)
    {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    }
    catch (const std::domain_error &e)
    {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
