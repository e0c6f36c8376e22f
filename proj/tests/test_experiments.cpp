#include "doctest.h"
#include "oracles.hpp"

#include "szlab/experiments.hpp"

#include <filesystem>
#include <set>

using namespace szlab;
using oracle::cd;

namespace {

RationalDatumd two_term() { return {{0, cd(1.0), cd(1.0)}, {0, cd(2.0, 0.3), cd(-0.8)}}; }

const char* small_probe = R"({
  "experiment": "wave_operator_probe",
  "grid": {"Lx": 16.0, "nx": 32, "Ly": 8.0, "ny": 16},
  "datum": {"kind": "random", "amplitude": 0.01},
  "time": {"t_min": 2.718281828459045, "t_max": 10.0, "dt": 0.05, "dtau": 0.05}
})";

double fdiff(const Spectrum2Dd& a, const Spectrum2Dd& b)
{
    const auto fa = to_representation(a, Representation::Fourier), fb = to_representation(b, Representation::Fourier);
    return std::sqrt((fa.values - fb.values).abs2().sum());
}

} // namespace

TEST_CASE("resonant clock")
{
    double worst = 0;
    for (double t : {1e-3, 0.5, 1.0, std::exp(1.0), 20.0, 1e4})
        worst = std::max(worst, std::abs(t_of_tau(tau_of_t(t)) - t) / t);
    CHECK(worst <= 1e-14);
    CHECK(tau_of_t(1.0) == 0.0);
    CHECK(tau_of_t(std::exp(1.0)) == doctest::Approx(pi_v<double>).epsilon(1e-15));
    CHECK_THROWS(tau_of_t(0.0));
    CHECK_THROWS(tau_of_t(-1.0));
}

TEST_CASE("dyadic checkpoints")
{
    const double e = std::exp(1.0);
    const auto c = dyadic_checkpoints(e, std::exp(3.0));
    REQUIRE(c.size() == 4);
    CHECK(c[0] == e);
    CHECK(c[1] == 2 * e);
    CHECK(c[2] == 4 * e);
    CHECK(c[3] == std::exp(3.0));
}

TEST_CASE("config parsing names what is wrong")
{
    CHECK(parse_config(small_probe).experiment == "wave_operator_probe");

    try {
        parse_config(R"({"experiment": "szego1d", "datum": {"kind": "zero"}, "time": {"t_max": 1, "dt": 0.1}})");
        FAIL("missing grid accepted");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("grid") != std::string::npos);
    }

    const std::string text(small_probe);
    try {
        parse_config(text.substr(0, 60));
        FAIL("truncated config accepted");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("byte") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_config(R"({"experiment": "nope", "grid": {"Lx": 1, "nx": 8, "Ly": 1, "ny": 8},
        "datum": {"kind": "zero"}, "time": {}})"),
                    ConfigError);
    // non power-of-two grid and reversed window
    CHECK_THROWS_AS(parse_config(R"({"experiment": "wave_operator_probe", "grid": {"Lx": 1, "nx": 12, "Ly": 1, "ny": 8},
        "datum": {"kind": "zero"}, "time": {"t_min": 5, "t_max": 2, "dt": 0.1, "dtau": 0.1}})"),
                    ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("list of experiments")
{
    std::set<std::string> names;
    for (const auto& [n, doc] : list_experiments())
        names.insert(n);
    for (const char* n : {"wave_operator_probe", "cascade", "conservation", "resonant_compare", "szego1d"})
        CHECK(names.count(n) == 1);
}

TEST_CASE("runs are deterministic for a fixed seed")
{
    ExperimentConfig cfg = parse_config(small_probe);
    cfg.seed = 7;
    const auto a = run_experiment(cfg), b = run_experiment(cfg);
    REQUIRE(a.tables.size() == b.tables.size());
    CHECK(a.tables[0].rows == b.tables[0].rows);
    cfg.seed = 8;
    const auto c = run_experiment(cfg);
    CHECK(c.tables[0].rows != a.tables[0].rows);
}

TEST_CASE("thread count does not change results")
{
    const ExperimentConfig cfg = parse_config(small_probe);
    const int saved = num_threads();
    set_num_threads(1);
    const auto a = run_experiment(cfg);
    set_num_threads(3);
    const auto b = run_experiment(cfg);
    set_num_threads(saved);
    CHECK(a.tables[0].rows == b.tables[0].rows);
}

TEST_CASE("zero datum gives a trivial probe")
{
    ExperimentConfig cfg = parse_config(small_probe);
    cfg.datum.kind = "zero";
    const auto rep = wave_operator_probe(cfg);
    CHECK(rep.trivial);
    CHECK(rep.verdict());
    for (const auto& r : rep.rows) {
        CHECK(r.y == 0.0);
        CHECK(r.z == 0.0);
    }
    CHECK(run_experiment(cfg).pass());
}

TEST_CASE("resonant deviation scales as rho cubed")
{
    // G(tau) - G(0) = rho^3 tau R(u0) + O(rho^5) for G(0) = rho u0
    const auto g = make_grid2d(4.0, 8, 25.0, 512);
    DatumSpec d;
    d.kind = "rational";
    d.terms = two_term();
    std::vector<double> rhos, devs;
    for (double rho : {0.2, 0.1, 0.05, 0.025}) {
        d.rho = rho;
        const auto G0 = make_resonant_state(make_datum(d, g));
        const auto G = evolve_resonant(G0, 0.5, 0.01);
        rhos.push_back(rho);
        devs.push_back(fdiff(G.spectrum, G0.spectrum));
    }
    const LinearFit f = loglog_fit(rhos, devs);
    MESSAGE("deviation exponent " << f.slope);
    CHECK(f.slope == doctest::Approx(3.0).epsilon(0.1 / 3.0));
}

TEST_CASE("conservation battery on the zero trajectory")
{
    const auto g = make_grid2d(4.0, 8, 4.0, 8);
    Trajectory tr;
    tr.kind = "halfwave";
    tr.times = {0.0, 1.0, 2.0};
    tr.states.assign(3, Spectrum2Dd::zeros(g, Representation::Fourier));
    const auto rep = conservation_battery(tr);
    CHECK(rep.series.size() == 3);
    CHECK(rep.drifts.at("mass_rel") == 0.0);
    CHECK(rep.drifts.at("mass_rate") == 0.0);
}

TEST_CASE("rational datum JSON round trip")
{
    const RationalDatumd d = {{0, cd(1.0, 0.25), cd(-0.5, 2.0)}, {2, cd(3.0), cd(0.125, -1.0)}};
    const RationalDatumd e = rational_datum_from_json(rational_datum_json(d));
    REQUIRE(e.size() == d.size());
    for (std::size_t q = 0; q < d.size(); ++q) {
        CHECK(e[q].k == d[q].k);
        CHECK(e[q].alpha == d[q].alpha);
        CHECK(e[q].c == d[q].c);
    }
}

TEST_CASE("CSV tables round trip bit for bit")
{
    const Table t{"demo", {"t", "value"}, {{1.0, 0.1}, {std::exp(1.0), -1.0 / 3.0}, {1e-300, 6.02e23}}};
    const auto path = (std::filesystem::temp_directory_path() / "szlab_table_test.csv").string();
    write_table_csv(path, t);
    const Table u = read_table_csv(path);
    std::filesystem::remove(path);
    CHECK(u.columns == t.columns);
    CHECK(u.rows == t.rows);
}

TEST_CASE("summary comparison flags drift")
{
    ExperimentConfig cfg = parse_config(small_probe);
    const auto a = run_experiment(cfg);
    const std::string stored = summary_json(a, "hash");
    CHECK(compare_summary(a, stored).empty());
    auto b = a;
    b.values["eps"] *= 1.0 + 1e-6;
    CHECK(!compare_summary(b, stored).empty());
}
