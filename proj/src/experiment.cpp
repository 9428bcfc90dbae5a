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

#include "trofdm/experiment.hpp"
#include "trofdm/analytic.hpp"
#include "trofdm/fft.hpp"
#include "trofdm/parallel.hpp"
#include "trofdm/randdist.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace trofdm::experiment
{
    using nlohmann::json;

    std::string to_string(Mode m)
    {
        switch (m)
        {
        case Mode::SweepSnr:
            return "sweep-snr";
        case Mode::GridUNt:
            return "grid-u-nt";
        case Mode::PdfCheck:
            return "pdf-check";
        case Mode::Validate:
            return "validate";
        }
        return "?";
    }

    Format format_from_string(const std::string &s)
    {
        if (s == "csv")
            return Format::Csv;
        if (s == "json")
            return Format::Json;
        throw ConfigError("unknown output format '" + s + "' (expected csv or json)");
    }

    ExperimentSpec ExperimentSpec::defaults(Mode mode)
    {
        ExperimentSpec s;
        s.mode = mode;
        s.positions = {link::Position::Intended};
        switch (mode)
        {
        case Mode::SweepSnr:
            s.snr_grid = {0, 5, 10, 15, 20, 25, 30};
            s.u_list = {2};
            s.nt_list = {1, 2, 4};
            break;
        case Mode::GridUNt:
            s.snr_grid = {30};
            s.u_list = {1, 2, 4, 8};
            s.nt_list = {1, 2, 4};
            s.positions = {link::Position::Intended, link::Position::Unintended};
            break;
        case Mode::PdfCheck:
            break;
        case Mode::Validate:
            s.n_trials = 2000;
            break;
        }
        return s;
    }

    namespace
    {
        template <typename T>
        std::vector<T> json_list(const json &j, const char *key)
        {
            if (!j.is_array())
                throw ConfigError(std::string("spec: '") + key + "' must be an array");
            return j.get<std::vector<T>>();
        }

        const std::set<std::string> known_keys = {"snr_db",    "u",        "n_t",  "positions", "trials",
                                                  "seed",      "pdp",      "mode", "grid",      "truncation",
                                                  "format",    "out",      "workers", "integral", "pdf",
                                                  "normalization"};
    }

    ExperimentSpec ExperimentSpec::from_json_text(const std::string &text, ExperimentSpec s)
    {
        json j;
        try
        {
            j = json::parse(text);
        }
        catch (const json::parse_error &e)
        {
            throw ConfigError(std::string("spec: invalid JSON: ") + e.what());
        }
        if (!j.is_object())
            throw ConfigError("spec: top level must be an object");
        for (const auto &[k, v] : j.items())
            if (!known_keys.count(k))
                throw ConfigError("spec: unknown key '" + k + "'");
        try
        {
            if (j.contains("snr_db"))
                s.snr_grid = json_list<double>(j["snr_db"], "snr_db");
            if (j.contains("u"))
                s.u_list = json_list<int>(j["u"], "u");
            if (j.contains("n_t"))
                s.nt_list = json_list<int>(j["n_t"], "n_t");
            if (j.contains("positions"))
            {
                s.positions.clear();
                for (const auto &p : json_list<std::string>(j["positions"], "positions"))
                    s.positions.push_back(link::position_from_string(p));
            }
            if (j.contains("trials"))
                s.n_trials = j["trials"].get<long>();
            if (j.contains("seed"))
                s.seed = j["seed"].get<std::uint64_t>();
            if (j.contains("pdp"))
            {
                const auto &p = j["pdp"];
                s.config.pdp = p.is_string() ? channel::PowerDelayProfile::from_name_or_path(p.get<std::string>())
                                             : channel::PowerDelayProfile::from_json_text(p.dump());
            }
            // "mode" names the experiment; a spec written for another subcommand is an error.
            if (j.contains("mode") && j["mode"].get<std::string>() != to_string(s.mode))
                throw ConfigError("spec: written for '" + j["mode"].get<std::string>() + "', not '" +
                                  to_string(s.mode) + "'");
            if (j.contains("normalization"))
                s.config.mode = channel::normalization_from_string(j["normalization"].get<std::string>());
            if (j.contains("grid"))
            {
                const auto &g = j["grid"];
                s.config.grid.sample_period_ns = g.value("sample_period_ns", s.config.grid.sample_period_ns);
                s.config.grid.n_subcarriers = g.value("n_subcarriers", s.config.grid.n_subcarriers);
                s.config.grid.cp_length = g.value("cp_length", s.config.grid.cp_length);
            }
            if (j.contains("truncation"))
                s.trunc.terms = j["truncation"].get<int>();
            if (j.contains("format"))
                s.format = format_from_string(j["format"].get<std::string>());
            if (j.contains("out"))
                s.output_path = j["out"].get<std::string>();
            if (j.contains("workers"))
                s.workers = j["workers"].get<unsigned>();
            if (j.contains("integral"))
                s.with_integral = j["integral"].get<bool>();
            if (j.contains("pdf"))
            {
                const auto &p = j["pdf"];
                s.pdf.terms = p.value("terms", s.pdf.terms);
                s.pdf.sigma1 = p.value("sigma1", s.pdf.sigma1);
                s.pdf.sigma2 = p.value("sigma2", s.pdf.sigma2);
                s.pdf.n_samples = p.value("samples", s.pdf.n_samples);
                s.pdf.bins = p.value("bins", s.pdf.bins);
            }
        }
        catch (const json::exception &e)
        {
            throw ConfigError(std::string("spec: ") + e.what());
        }
        return s;
    }

    ExperimentSpec ExperimentSpec::load(const std::string &path, ExperimentSpec base)
    {
        std::ifstream in(path);
        if (!in)
            throw IoError("cannot read spec file '" + path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        return from_json_text(ss.str(), std::move(base));
    }

    void ExperimentSpec::validate() const
    {
        config.grid.validate();
        config.pdp.validate();
        trunc.validate();
        if (n_trials < 1)
            throw ConfigError("number of trials must be >= 1");
        for (double s : snr_grid)
            if (!std::isfinite(s))
                throw ConfigError("SNR grid values must be finite");
        switch (mode)
        {
        case Mode::SweepSnr:
        case Mode::GridUNt:
            if (snr_grid.empty())
                throw ConfigError("SNR grid is empty");
            if (mode == Mode::GridUNt && snr_grid.size() != 1)
                throw ConfigError("grid-u-nt takes exactly one SNR value");
            if (u_list.empty() || nt_list.empty())
                throw ConfigError("U and N_T lists must be non-empty");
            if (positions.empty())
                throw ConfigError("no receiver position selected");
            for (int u : u_list)
                for (int nt : nt_list)
                {
                    link::SystemConfig c = config;
                    c.bof = u;
                    c.n_tx = nt;
                    c.validate();
                }
            channel::map_pdp_to_taps(config.pdp, config.grid);
            break;
        case Mode::PdfCheck:
            randdist::ProductSumParams{pdf.terms, pdf.sigma1, pdf.sigma2}.validate();
            if (pdf.n_samples < 100000)
                throw ConfigError("pdf-check needs at least 100000 samples");
            if (pdf.bins < 1)
                throw ConfigError("pdf-check needs at least one bin");
            break;
        case Mode::Validate:
            channel::map_pdp_to_taps(config.pdp, config.grid);
            break;
        }
    }

    std::string ExperimentSpec::to_json_text() const
    {
        json j;
        j["mode"] = to_string(mode);
        j["snr_db"] = snr_grid;
        j["u"] = u_list;
        j["n_t"] = nt_list;
        std::vector<std::string> pos;
        for (auto p : positions)
            pos.push_back(link::to_string(p));
        j["positions"] = pos;
        j["trials"] = n_trials;
        j["seed"] = seed;
        j["pdp"] = json::parse(config.pdp.to_json_text());
        j["normalization"] = channel::to_string(config.mode);
        j["grid"] = {{"sample_period_ns", config.grid.sample_period_ns},
                     {"n_subcarriers", config.grid.n_subcarriers},
                     {"cp_length", config.grid.cp_length}};
        j["truncation"] = trunc.terms;
        j["integral"] = with_integral;
        if (mode == Mode::PdfCheck)
            j["pdf"] = {{"terms", pdf.terms},
                        {"sigma1", pdf.sigma1},
                        {"sigma2", pdf.sigma2},
                        {"samples", pdf.n_samples},
                        {"bins", pdf.bins}};
        return j.dump();
    }

    namespace
    {
        double closed_form(link::Position p, const analytic::ClosedFormParams &cp)
        {
            return p == link::Position::Intended ? analytic::nmse_intended_closed(cp)
                                                 : analytic::nmse_unintended_closed(cp);
        }

        double integral_oracle(link::Position p, const analytic::ClosedFormParams &cp)
        {
            return p == link::Position::Intended ? analytic::nmse_intended_integral(cp)
                                                 : analytic::nmse_unintended_integral(cp);
        }

        struct Point
        {
            link::Position position;
            int u;
            int nt;
            double snr_db;
            link::NmseEstimate mc;
            double closed = 0.0;
            double integral = std::nan("");
        };

        // Monte-Carlo per (position, U, N_T) over the whole SNR grid, then the analytic
        // values for every point in parallel. Points stay in spec order.
        std::vector<Point> evaluate_points(const ExperimentSpec &spec)
        {
            std::vector<Point> pts;
            link::McOptions opts;
            opts.workers = spec.workers;
            for (auto pos : spec.positions)
                for (int u : spec.u_list)
                    for (int nt : spec.nt_list)
                    {
                        link::SystemConfig c = spec.config;
                        c.bof = u;
                        c.n_tx = nt;
                        const auto est =
                            link::monte_carlo_nmse_sweep(c, pos, spec.snr_grid, spec.n_trials, spec.seed, opts);
                        for (std::size_t i = 0; i < spec.snr_grid.size(); ++i)
                            pts.push_back({pos, u, nt, spec.snr_grid[i], est[i]});
                    }
            parallel_for(static_cast<long>(pts.size()), spec.workers, [&](long i) {
                auto &p = pts[i];
                const auto cp = analytic::ClosedFormParams::at_db(p.snr_db, p.u, p.nt, spec.trunc);
                p.closed = closed_form(p.position, cp);
                if (spec.with_integral)
                    p.integral = integral_oracle(p.position, cp);
            });
            return pts;
        }

        double to_db(double v)
        {
            return v > 0.0 ? linear_to_db(v) : std::nan("");
        }

        std::string spec_meta(const ExperimentSpec &spec)
        {
            return spec.to_json_text();
        }
    }

    Table run_sweep_snr(const ExperimentSpec &spec)
    {
        spec.validate();
        Table t;
        t.columns = {{"snr_db"},           {"u"},           {"n_t"},
                     {"position"},         {"mc_nmse"},     {"mc_ci95"},
                     {"closed_form"},      {"integral_oracle"}, {"mc_nmse_db", false},
                     {"closed_form_db", false}, {"integral_oracle_db", false}, {"trials", false}};
        for (const auto &p : evaluate_points(spec))
            t.add_row({p.snr_db, std::int64_t{p.u}, std::int64_t{p.nt}, link::to_string(p.position), p.mc.mean_nmse,
                       p.mc.ci95_halfwidth, p.closed, p.integral, to_db(p.mc.mean_nmse), to_db(p.closed),
                       to_db(p.integral), std::int64_t{p.mc.n_trials}});
        t.meta_json["spec"] = spec_meta(spec);
        return t;
    }

    Table run_grid_u_nt(const ExperimentSpec &spec)
    {
        spec.validate();
        ExperimentSpec s = spec;
        s.with_integral = false;
        Table t;
        t.columns = {{"snr_db"},  {"u"},       {"n_t"},         {"position"},
                     {"mc_nmse"}, {"mc_ci95"}, {"closed_form"}, {"mc_nmse_db", false},
                     {"closed_form_db", false}};
        for (const auto &p : evaluate_points(s))
            t.add_row({p.snr_db, std::int64_t{p.u}, std::int64_t{p.nt}, link::to_string(p.position), p.mc.mean_nmse,
                       p.mc.ci95_halfwidth, p.closed, to_db(p.mc.mean_nmse), to_db(p.closed)});
        t.meta_json["spec"] = spec_meta(spec);
        return t;
    }

    PdfCheckResult run_pdf_check(const ExperimentSpec &spec)
    {
        spec.validate();
        const randdist::ProductSumParams params{spec.pdf.terms, spec.pdf.sigma1, spec.pdf.sigma2};
        Rng rng = derive_rng(spec.seed, 0);
        std::vector<double> samples(spec.pdf.n_samples);
        for (auto &r : samples)
            r = randdist::sample_product_sum(params, rng);

        const double scale = params.sigma1 * params.sigma2;
        const double r_max = scale * (std::sqrt(static_cast<double>(params.terms)) + 4.0);
        const int bins = spec.pdf.bins;
        const double width = r_max / bins;
        std::vector<long> counts(bins, 0);
        for (double r : samples)
        {
            const auto b = static_cast<long>(r / width);
            if (b < bins)
                ++counts[b];
        }

        PdfCheckResult out;
        Table &t = out.table;
        t.columns = {{"r_lo"}, {"r_hi"}, {"r_mid"}, {"empirical_density"}, {"pdf_envelope"}, {"theory_bin_density"}};
        std::vector<double> envelope(bins), mass(bins);
        parallel_for(bins, spec.workers, [&](long b) {
            const double lo = b * width;
            const double hi = lo + width;
            envelope[b] = randdist::pdf_abs_product_sum(0.5 * (lo + hi), params);
            mass[b] = randdist::mass_abs_product_sum(lo, hi, params);
        });
        const double n = static_cast<double>(samples.size());
        for (int b = 0; b < bins; ++b)
        {
            const double lo = b * width;
            t.add_row({lo, lo + width, lo + 0.5 * width, counts[b] / (n * width), envelope[b], mass[b] / width});
        }

        const randdist::ProductSumCdf cdf(params);
        out.ks = randdist::ks_distance(samples, [&](double r) { return cdf(r); });
        t.meta_json["spec"] = spec_meta(spec);
        t.meta_json["ks_distance"] = format_double(out.ks);
        return out;
    }

    bool ValidationReport::passed() const
    {
        return std::none_of(checks.begin(), checks.end(), [](const Check &c) { return c.status == CheckStatus::Fail; });
    }

    Table ValidationReport::table() const
    {
        Table t;
        t.columns = {{"check"}, {"measured"}, {"tolerance"}, {"status"}, {"detail"}};
        for (const auto &c : checks)
        {
            const char *st = c.status == CheckStatus::Pass ? "pass" : c.status == CheckStatus::Fail ? "fail" : "info";
            t.add_row({c.name, c.measured, c.tolerance, std::string(st), c.detail});
        }
        t.meta_json["seed"] = std::to_string(seed);
        t.meta_json["verdict"] = passed() ? "\"pass\"" : "\"fail\"";
        return t;
    }
}
