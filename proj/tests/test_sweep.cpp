#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "magnoent/errors.hpp"
#include "magnoent/sweep.hpp"
#include "magnoent/sweep_io.hpp"

using namespace magnoent;

namespace {

RunConfig config_from(const std::string& text)
{
    std::istringstream in(text);
    return run_config_from(parse_key_values(in));
}

SweepSpec mixed_grid()
{
    // Covers ok, unstable and separable points.
    return config_from("G_c = 0.7 * omega_1\n"
                       "axis1 = delta_c, -0.5, 3, 15, linear, omega_1\n"
                       "axis2 = g_m_hz, 0, 16e6, 9\n")
        .sweep_spec();
}

std::vector<std::string> lines_of(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        out.push_back(line);
    }
    return out;
}

} // namespace

TEST_CASE("axis parsing and coordinates")
{
    const Axis a = Axis::parse("delta_c, -1, 3, 5, linear, omega_1");
    CHECK(a.target.field == "delta_c");
    CHECK(a.target.unit == AxisUnit::Relative);
    CHECK(a.coordinates() == std::vector<double>{-1.0, 0.0, 1.0, 2.0, 3.0});
    CHECK(a.target.label() == "delta_c/omega_1");

    const Axis l = Axis::parse("temperature_k, 0.01, 1, 3, log");
    CHECK(l.target.unit == AxisUnit::Kelvin);
    CHECK(l.coordinate(1) == doctest::Approx(0.1));
    CHECK(l.coordinate(2) == 1.0);

    const Axis h = Axis::parse("kappa_hz, 1e6, 9e6, 2");
    SystemParams p = default_params();
    h.target.apply(p, 2e6, default_params());
    CHECK(p.kappa == doctest::Approx(angular(2e6)));

    const Axis single = Axis::parse("G_c, 0.3, 0.3, 1, linear, omega_1");
    CHECK(single.coordinates() == std::vector<double>{0.3});

    CHECK_THROWS_AS(Axis::parse("delta_c, 3, -1, 5"), ConfigError);
    CHECK_THROWS_AS(Axis::parse("delta_c, 0, 1, 0"), ConfigError);
    CHECK_THROWS_AS(Axis::parse("delta_c, 0, 1, 2.5"), ConfigError);
    CHECK_THROWS_AS(Axis::parse("delta_c, 0, 1, 1"), ConfigError);
    CHECK_THROWS_AS(Axis::parse("kappa, 0, 1, 4, log"), ConfigError);
    CHECK_THROWS_AS(Axis::parse("kappa, 1, 2, 4, cubic"), ConfigError);
    CHECK_THROWS_AS(Axis::parse("lambda, 0, 1, 4"), ConfigError);
    CHECK_THROWS_AS(Axis::parse("temperature_hz, 0, 1, 4"), ConfigError);
    CHECK_THROWS_AS(Axis::parse("delta_c_hz, 0, 1, 4, linear, omega_1"), ConfigError);
    CHECK_THROWS_AS(Axis::parse("temperature, 0, 1, 4, linear, omega_1"), ConfigError);
    CHECK_THROWS_AS(Axis::parse("delta_c, 0, 1"), ConfigError);
}

TEST_CASE("run config parsing")
{
    const auto rc = config_from("kappa_hz = 6e6\naxis1 = G_c, 0, 0.9, 4, linear, omega_1\n"
                                "pair = cavity, m1\noutput = out.csv\n");
    CHECK(rc.params.values.kappa == doctest::Approx(angular(6e6)));
    REQUIRE(rc.axes.size() == 1);
    CHECK(rc.pair == ModePair(Mode::M1, Mode::Cavity));
    CHECK(rc.output == std::filesystem::path("out.csv"));

    CHECK_THROWS_AS(config_from("axis3 = G_c, 0, 1, 2\n"), ConfigError);
    CHECK_THROWS_AS(config_from("axis2 = G_c, 0, 1, 2\n"), ConfigError);
    CHECK_THROWS_AS(config_from("pair = m1\n"), ConfigError);
    CHECK_THROWS_AS(config_from("pair = m1, m1\n"), ConfigError);
    CHECK_THROWS_AS(config_from("pair = m1, m2, cavity\n"), ConfigError);
    CHECK_THROWS_AS(config_from("kappa = 1\n").sweep_spec(), ConfigError);
    CHECK_THROWS_AS(config_from("axis1 = G_c, 0, 1, 2\naxis2 = G_c, 0, 1, 2\n").sweep_spec(), ConfigError);
    CHECK_THROWS_AS(config_from("axis1 = G_c, 0, 1, 2\n").threshold_spec(), ConfigError);
    CHECK_THROWS_AS(config_from("threshold = temperature_k, 0.1\n"), ConfigError);
    CHECK_THROWS_AS(config_from("axis1 = G_c, 0, 1, 2\nkappa_hz = -1\n").sweep_spec().base.resolved(),
                    InvalidParameter);
}

TEST_CASE("grid expansion applies axes, units and links")
{
    const auto spec = config_from("axis1 = kappa_hz, 2e6, 4e6, 3\n"
                                  "axis2 = delta_c, 0.5, 1.5, 2, linear, omega_1\n")
                          .sweep_spec();
    const auto grid = expand_grid(spec);
    REQUIRE(grid.size() == 6);
    // Row-major: axis2 varies fastest.
    CHECK(grid[1].params.kappa == doctest::Approx(angular(2e6)));
    CHECK(grid[1].params.delta_c == doctest::Approx(1.5 * angular(10e6)));
    CHECK(grid[2].params.kappa == doctest::Approx(angular(3e6)));
    // G_eff = 0.55 kappa follows the swept kappa.
    for (const auto& g : grid) {
        CHECK(g.params.G_eff == doctest::Approx(0.55 * g.params.kappa));
        CHECK(g.error.empty());
    }

    const auto geff = config_from("axis1 = G_eff_hz, 1e6, 2e6, 2\n").sweep_spec();
    CHECK(expand_grid(geff)[0].params.G_eff == doctest::Approx(angular(1e6)));
}

TEST_CASE("invalid grid points are reported as errors")
{
    const auto spec = config_from("axis1 = gamma_m_hz, -1e5, 1e5, 3\n").sweep_spec();
    const auto r = run_sweep(spec, 2);
    REQUIRE(r.rows() == 3);
    CHECK(r.at(0).status == PointStatus::Error);
    CHECK(r.at(1).status == PointStatus::Error); // gamma_m = 0
    CHECK(r.at(2).status != PointStatus::Error);
    const auto lines = lines_of(csv_text(r));
    CHECK(lines[1] == "-1e+05,,,error");
}

TEST_CASE("parallel sweep matches the serial reference")
{
    const auto spec = mixed_grid();
    const auto serial = run_sweep_serial(spec);
    CHECK(serial.count(PointStatus::Ok) > 0);
    CHECK(serial.count(PointStatus::Unstable) > 0);
    const std::string expected = csv_text(serial);
    for (int jobs : {1, 2, 3, 8}) {
        CAPTURE(jobs);
        CHECK(csv_text(run_sweep(spec, jobs)) == expected);
    }
    const auto parallel = run_sweep(spec, 4);
    for (std::size_t k = 0; k < serial.rows(); ++k) {
        CHECK(parallel.points[k].status == serial.points[k].status);
        CHECK(parallel.points[k].log_negativity == serial.points[k].log_negativity);
        CHECK(parallel.points[k].margin == serial.points[k].margin);
    }
}

TEST_CASE("CSV layout")
{
    const auto spec = mixed_grid();
    const auto r = run_sweep(spec);
    const auto lines = lines_of(csv_text(r));
    REQUIRE(lines.size() == 1 + 15 * 9);
    CHECK(lines[0] == "axis1,axis2,E_N,status");
    CHECK(lines[1].rfind("-0.5,0,", 0) == 0);
    CHECK(lines[2].rfind("-0.5,2e+06,", 0) == 0);
    CHECK(lines[10].rfind("-0.25,0,", 0) == 0);
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const auto cells = split_trimmed(lines[k], ',');
        REQUIRE(cells.size() == 4);
        const auto& pt = r.points[k - 1];
        CHECK(cells[3] == to_string(pt.status));
        if (pt.status == PointStatus::Ok) {
            CHECK(parse_number(cells[2], "E_N") == pt.log_negativity);
        } else {
            CHECK(cells[2].empty());
        }
    }

    const auto one = run_sweep(config_from("axis1 = temperature_k, 0.01, 0.01, 1\n").sweep_spec());
    const auto one_lines = lines_of(csv_text(one));
    REQUIRE(one_lines.size() == 2);
    CHECK(one_lines[1].rfind("0.01,,", 0) == 0);
}

TEST_CASE("sweep files and metadata")
{
    const auto dir = std::filesystem::temp_directory_path() / "magnoent_sweep_test";
    std::filesystem::create_directories(dir);
    const auto csv = dir / "grid.csv";
    const auto spec = mixed_grid();
    const auto r = run_sweep(spec);
    write_sweep(r, csv);
    CHECK(sidecar_path(csv) == dir / "grid.json");

    std::ifstream in(csv);
    std::stringstream body;
    body << in.rdbuf();
    CHECK(body.str() == csv_text(r));

    std::ifstream meta_in(sidecar_path(csv));
    const auto meta = nlohmann::json::parse(meta_in);
    CHECK(meta["rows"] == r.rows());
    CHECK(meta["ok"].get<std::size_t>() + meta["unstable"].get<std::size_t>() + meta["error"].get<std::size_t>()
          == r.rows());
    CHECK(meta["pair"] == nlohmann::json::array({"m1", "m2"}));
    CHECK(meta["axes"].size() == 2);
    CHECK(meta["axes"][0]["label"] == "delta_c/omega_1");
    CHECK(meta["axes"][1]["unit"] == "Hz");
    CHECK(meta["base_params"]["G_c"].get<double>() == doctest::Approx(0.7 * angular(10e6)));
    CHECK(meta["links"][0]["target"] == "G_eff");
    CHECK(meta["max_E_N"].get<double>() == r.max_log_negativity());
    const auto row = meta["max_E_N_row"].get<std::size_t>();
    CHECK(r.points[row].log_negativity == r.max_log_negativity());
    CHECK(meta.contains("timestamp"));
    CHECK(meta["version"] == "0.1.0");
    std::filesystem::remove_all(dir);

    CHECK_THROWS_AS(write_sweep(r, "/nonexistent/dir/x.csv"), ConfigError);
}

TEST_CASE("threshold search")
{
    const std::string base = "G_c = 0.7 * omega_1\ng_m_hz = 0.5e6\n";

    SUBCASE("temperature death point is independent of the bracket")
    {
        auto spec = config_from(base + "threshold = temperature_k, 0.01, 1\n").threshold_spec();
        const auto a = find_threshold(spec);
        spec.hi = 2.0;
        const auto b = find_threshold(spec);
        CHECK(a.critical > 0.05);
        CHECK(a.critical < 0.1);
        CHECK(std::abs(a.critical - b.critical) < 2e-4 * a.critical);
        CHECK(a.separable_side - a.entangled_side <= 1e-4 * a.separable_side);

        SystemParams p = spec.base.resolved();
        p.temperature = a.entangled_side;
        CHECK(entanglement_at(p, spec.pair).log_negativity > 0.0);
        p.temperature = a.separable_side;
        CHECK(entanglement_at(p, spec.pair).log_negativity == 0.0);
    }
    SUBCASE("log-scale bisection finds the same point")
    {
        auto spec = config_from(base + "threshold = temperature_k, 0.01, 1, log\n").threshold_spec();
        const auto lin = find_threshold(config_from(base + "threshold = temperature_k, 0.01, 1\n").threshold_spec());
        CHECK(find_threshold(spec).critical == doctest::Approx(lin.critical).epsilon(2e-4));
    }
    SUBCASE("bracket errors")
    {
        CHECK_THROWS_AS(find_threshold(config_from(base + "threshold = temperature_k, 0.01, 0.02\n").threshold_spec()),
                        BracketError);
        CHECK_THROWS_AS(find_threshold(config_from(base + "threshold = temperature_k, 1, 2\n").threshold_spec()),
                        BracketError);
        CHECK_THROWS_AS(find_threshold(config_from(base + "threshold = delta_c, 1, -1, linear, omega_1\n")
                                           .threshold_spec()),
                        BracketError);
        CHECK_THROWS_AS(find_threshold(config_from(base + "threshold = temperature_k, 0.1, 0.1\n").threshold_spec()),
                        ConfigError);
    }
    SUBCASE("an unstable band inside the bracket")
    {
        const auto spec = config_from("G_c = 0.7 * omega_1\ng_m_hz = 5e6\n"
                                      "threshold = delta_m, 0.4, 0.9, linear, omega_1\n")
                              .threshold_spec();
        try {
            find_threshold(spec);
            FAIL("expected ThresholdInstability");
        } catch (const ThresholdInstability& e) {
            CHECK(e.point() == doctest::Approx(0.65));
        }
    }
    SUBCASE("profile maximisation")
    {
        auto spec = config_from(base + "threshold = temperature_k, 0.01, 1\n"
                                       "profile = delta_c, 0.5, 1.5, 11, linear, omega_1\n")
                        .threshold_spec();
        const auto at = threshold_objective(spec, 0.01);
        REQUIRE(at.status == PointStatus::Ok);
        SystemParams p = spec.base.resolved();
        double best = 0.0;
        for (double dc : Axis::parse("delta_c, 0.5, 1.5, 11").coordinates()) {
            p.delta_c = dc * p.omega_1;
            best = std::max(best, entanglement_at(p, spec.pair).log_negativity);
        }
        CHECK(at.log_negativity == best);
        CHECK(find_threshold(spec).critical >= find_threshold(config_from(base + "threshold = temperature_k, 0.01, 1\n")
                                                                  .threshold_spec())
                                                   .critical);

        spec.profile = Axis::parse("temperature_k, 0, 1, 3");
        CHECK_THROWS_AS(find_threshold(spec), ConfigError);
    }
}
