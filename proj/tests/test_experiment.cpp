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
#include "trofdm/randdist.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace trofdm;
using namespace trofdm::experiment;

namespace
{
    ExperimentSpec small_sweep()
    {
        ExperimentSpec s = ExperimentSpec::defaults(Mode::SweepSnr);
        s.snr_grid = {0.0, 20.0};
        s.u_list = {1, 2};
        s.nt_list = {2};
        s.positions = {link::Position::Intended, link::Position::Unintended};
        s.n_trials = 500;
        s.seed = 17;
        s.config.mode = channel::Normalization::InExpectation;
        return s;
    }

    std::string first_line(const std::string &text)
    {
        return text.substr(0, text.find('\n'));
    }
}

TEST_SUITE("experiment")
{
    TEST_CASE("spec parsing and overrides")
    {
        const auto base = ExperimentSpec::defaults(Mode::SweepSnr);
        CHECK(base.n_trials == 20000);
        CHECK(base.u_list == std::vector<int>{2});

        const auto s = ExperimentSpec::from_json_text(
            R"({"snr_db": [5, 15], "u": [1, 4], "n_t": [2], "positions": ["unintended"], "trials": 100,
                "seed": 9, "normalization": "in-expectation", "mode": "sweep-snr", "grid": {"n_subcarriers": 128}, "format": "json"})",
            base);
        CHECK(s.snr_grid == std::vector<double>{5.0, 15.0});
        CHECK(s.u_list == std::vector<int>{1, 4});
        CHECK(s.positions == std::vector<link::Position>{link::Position::Unintended});
        CHECK(s.n_trials == 100);
        CHECK(s.seed == 9);
        CHECK(s.config.mode == channel::Normalization::InExpectation);
        CHECK(s.config.grid.n_subcarriers == 128);
        CHECK(s.config.grid.cp_length == 64);
        CHECK(s.format == Format::Json);
        s.validate();

        CHECK_THROWS_AS(ExperimentSpec::from_json_text(R"({"snr": [1]})", base), ConfigError);
        CHECK_THROWS_AS(ExperimentSpec::from_json_text(R"({"mode": "pdf-check"})", base), ConfigError);
        CHECK_THROWS_AS(ExperimentSpec::from_json_text(R"({"u": 2})", base), ConfigError);
        CHECK_THROWS_AS(ExperimentSpec::from_json_text("[1,2", base), ConfigError);
        CHECK_THROWS_AS(ExperimentSpec::from_json_text(R"({"positions": ["nowhere"]})", base), ConfigError);
        CHECK_THROWS_AS(ExperimentSpec::load("/nonexistent/spec.json", base), IoError);
    }

    TEST_CASE("spec validation")
    {
        auto s = small_sweep();
        s.u_list.clear();
        CHECK_THROWS_AS(s.validate(), ConfigError);
        s = small_sweep();
        s.u_list = {3};
        CHECK_THROWS_AS(s.validate(), ConfigError);
        s = small_sweep();
        s.snr_grid.clear();
        CHECK_THROWS_AS(s.validate(), ConfigError);
        s = small_sweep();
        s.n_trials = 0;
        CHECK_THROWS_AS(s.validate(), ConfigError);
        auto g = ExperimentSpec::defaults(Mode::GridUNt);
        g.snr_grid = {10.0, 20.0};
        CHECK_THROWS_AS(g.validate(), ConfigError);
        auto p = ExperimentSpec::defaults(Mode::PdfCheck);
        p.pdf.n_samples = 1000;
        CHECK_THROWS_AS(p.validate(), ConfigError);
    }

    TEST_CASE("spec round trip")
    {
        for (auto mode : {Mode::SweepSnr, Mode::GridUNt, Mode::PdfCheck, Mode::Validate})
        {
            auto a = ExperimentSpec::defaults(mode);
            a.seed = 31;
            a.n_trials = 123;
            a.config.mode = channel::Normalization::InExpectation;
            const std::string text = a.to_json_text();
            const auto b = ExperimentSpec::from_json_text(text, ExperimentSpec::defaults(mode));
            CHECK(b.to_json_text() == text);
        }
    }

    TEST_CASE("sweep table layout and determinism")
    {
        const auto spec = small_sweep();
        const auto t = run_sweep_snr(spec);
        const std::string csv = t.to_csv();
        CHECK(first_line(csv) == "snr_db,u,n_t,position,mc_nmse,mc_ci95,closed_form,integral_oracle");
        CHECK(t.rows.size() == 8);
        CHECK(std::get<std::string>(t.at(0, "position")) == "intended");
        CHECK(std::get<std::string>(t.at(7, "position")) == "unintended");

        for (std::size_t r = 0; r < t.rows.size(); ++r)
        {
            const double mc = t.number(r, "mc_nmse");
            CHECK(mc > 0.0);
            CHECK(mc <= 1.0 + t.number(r, "mc_ci95"));
            const double db = t.number(r, "mc_nmse_db");
            CHECK(std::abs(std::pow(10.0, db / 10.0) - mc) <= 1e-12 * mc);
            // The EPA profile correlates the U spread copies, which moves the simulated
            // NMSE up to about 10% away from the independent-gain integral.
            const double oracle = t.number(r, "integral_oracle");
            CHECK(std::abs(mc - oracle) < 0.15 * oracle + 2.0 * t.number(r, "mc_ci95"));
        }

        auto spec2 = spec;
        spec2.workers = 1;
        CHECK(run_sweep_snr(spec2).to_csv() == csv);
        CHECK(run_sweep_snr(spec).to_json() == t.to_json());

        const std::string json = t.to_json();
        CHECK(json.find("\"mc_nmse_db\"") != std::string::npos);
        CHECK(json.find("\"seed\":17") != std::string::npos);
    }

    TEST_CASE("grid table")
    {
        auto spec = ExperimentSpec::defaults(Mode::GridUNt);
        spec.u_list = {1, 8};
        spec.nt_list = {2};
        spec.n_trials = 400;
        const auto t = run_grid_u_nt(spec);
        CHECK(first_line(t.to_csv()) == "snr_db,u,n_t,position,mc_nmse,mc_ci95,closed_form");
        REQUIRE(t.rows.size() == 4);
        // unintended rows: U = 8 worse than U = 1
        CHECK(t.number(3, "closed_form") > t.number(2, "closed_form"));
        CHECK(t.number(3, "mc_nmse") > t.number(2, "mc_nmse"));
    }

    TEST_CASE("pdf check")
    {
        auto spec = ExperimentSpec::defaults(Mode::PdfCheck);
        spec.pdf.bins = 20;
        const auto r = run_pdf_check(spec);
        CHECK(r.ks < 0.01);
        REQUIRE(r.table.rows.size() == 20);
        double mass = 0.0;
        for (std::size_t i = 0; i < r.table.rows.size(); ++i)
            mass += r.table.number(i, "theory_bin_density") * (r.table.number(i, "r_hi") - r.table.number(i, "r_lo"));
        // The histogram range ends in the far tail, so it holds slightly less than unit mass.
        const double r_end = r.table.number(r.table.rows.size() - 1, "r_hi");
        const randdist::ProductSumParams pp{spec.pdf.terms, spec.pdf.sigma1, spec.pdf.sigma2};
        CHECK(mass == doctest::Approx(randdist::mass_abs_product_sum(0.0, r_end, pp)).epsilon(1e-6));
        CHECK(mass > 0.99);

        spec.pdf.terms = 1;
        spec.pdf.sigma1 = spec.pdf.sigma2 = 1.0;
        const auto r1 = run_pdf_check(spec);
        CHECK(r1.ks < 0.01);
        CHECK(std::isfinite(r1.table.number(0, "theory_bin_density")));
    }

    TEST_CASE("table output")
    {
        Table t;
        t.columns = {{"a"}, {"b"}, {"hidden", false}};
        t.add_row({1.5, std::int64_t{3}, std::string("x,y")});
        t.add_row({0.1, std::int64_t{-1}, std::string("z")});
        CHECK(t.to_csv() == "a,b\n1.5,3\n0.10000000000000001,-1\n");
        CHECK_THROWS(t.add_row({1.0}));
        CHECK(format_double(0.1) == "0.10000000000000001");
        CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
        CHECK_THROWS_AS(write_text_file("/nonexistent/dir/out.csv", "x"), IoError);

        const std::string path = "test_experiment_table.csv";
        write_text_file(path, t.to_csv());
        std::ifstream in(path);
        std::stringstream ss;
        ss << in.rdbuf();
        CHECK(ss.str() == t.to_csv());
        std::remove(path.c_str());
    }
}
