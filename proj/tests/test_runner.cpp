// test_runner.cpp: trajectories, CSV output, checkpoints, batch mode

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spinbath/errors.hpp"
#include "spinbath/runner.hpp"
#include "spinbath/states.hpp"

#include <omp.h>

#include <cmath>
#include <fstream>
#include <sstream>

using namespace spinbath;
namespace fs = std::filesystem;

namespace {

RunConfig small_config(int n_env = 8, int n_steps = 40) {
    RunConfig c;
    c.system = {TopologyKind::ring, FamilyKind::Heisenberg, -5.0, 2, StateKind::UD};
    c.environment = {TopologyKind::spin_glass, FamilyKind::HeisenbergType, 0.15, n_env, StateKind::RANDOM};
    c.interaction_family = FamilyKind::HeisenbergType;
    c.delta = 0.15;
    c.run.tau = 0.3;
    c.run.n_steps = n_steps;
    c.run.seed = 7;
    c.run.metrics = known_metrics();
    c.run.checkpoint_every = 10;
    return c;
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / "spinbath_test_runner" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunOptions quiet(const fs::path& dir) {
    RunOptions o;
    o.out_dir = dir;
    o.quiet = true;
    return o;
}

double max_table_difference(const CsvTable& a, const CsvTable& b) {
    REQUIRE(a.columns == b.columns);
    REQUIRE(a.rows() == b.rows());
    double worst = 0.0;
    for (const auto& col : a.columns) {
        const auto& x = a.at(col);
        const auto& y = b.at(col);
        for (std::size_t k = 0; k < x.size(); ++k) {
            if (std::isnan(x[k]) || std::isnan(y[k])) {
                CHECK(std::isnan(x[k]) == std::isnan(y[k]));
                continue;
            }
            worst = std::max(worst, std::abs(x[k] - y[k]));
        }
    }
    return worst;
}

} // namespace

TEST_CASE("initial sample of the up-down pair") {
    const Trajectory tr(small_config());
    const auto m = tr.sample();
    CHECK(m.t == 0.0);
    CHECK(m.sigma == doctest::Approx(0.5).epsilon(1e-13));
    // triplet weights {1/2, 0, 0}: two pairs differ by 1/2
    CHECK(m.gamma == doctest::Approx(std::sqrt(0.5)).epsilon(1e-13));
    CHECK(m.s_quad < 1e-13);
    REQUIRE(m.echo.has_value());
    CHECK(*m.echo == doctest::Approx(1.0).epsilon(1e-13));
    REQUIRE(m.correlators.has_value());
    CHECK(m.correlators->s1_dot_s2 == doctest::Approx(-0.25).epsilon(1e-13));
    double s = 0.0;
    for (double d : m.rho_diag) {
        s += d;
    }
    CHECK(std::abs(s - 1.0) < 1e-12);
}

TEST_CASE("trajectory follows dense propagation") {
    auto c = small_config(6);
    Trajectory tr(c);
    const StateVector psi0 = tr.state();
    for (int k = 0; k < 15; ++k) {
        tr.advance();
    }
    CHECK(tr.step_index() == 15);
    const StateVector exact = propagate_exact(tr.spec(), psi0, tr.time());
    double d = 0.0;
    for (std::size_t k = 0; k < exact.dim(); ++k) {
        d += std::norm(exact.amps[k] - tr.state().amps[k]);
    }
    CHECK(std::sqrt(d) < 1e-10);
}

TEST_CASE("echo reference equals an uncoupled trajectory") {
    const auto c = small_config(6);
    Trajectory coupled(c);
    Trajectory free(c, coupled.spec().without_interaction());
    // same seed, so the same initial product state
    CHECK(free.state().amps == coupled.state().amps);
    for (int k = 0; k < 20; ++k) {
        free.advance();
    }
    const auto rho0 = isolated_system_rho(coupled.basis(), coupled.initial_system_state(), free.time());
    const auto ref = to_energy_basis(free.rho(), coupled.basis());
    CHECK((rho0.m - ref.m).cwiseAbs().maxCoeff() < 1e-10);
    // without coupling the echo stays at one
    CHECK(*free.sample().echo == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("CSV layout") {
    CHECK(csv_header(4) == "t,sigma,gamma,delta,b,S_quad,echo,E_S,rho_0,rho_1,rho_2,rho_3");
    MetricSample m;
    m.t = 0.1;
    m.sigma = 0.5;
    m.gamma = 0.25;
    m.b = std::nullopt;
    m.delta = std::nullopt;
    m.s_quad = 0.0;
    m.e_s = -1.0;
    m.rho_diag = {1.0, 0.0};
    RunSettings r;
    r.metrics = {"sigma", "E_S", "rho"};
    CHECK(csv_row(m, r) == "0.10000000000000001,0.5,,,,,,-1,1,0");
    r.metrics = known_metrics();
    CHECK(csv_row(m, r) == "0.10000000000000001,0.5,0.25,,,0,,-1,1,0");
}

TEST_CASE("zero steps write only the initial row") {
    auto c = small_config(4, 0);
    const auto dir = scratch("zero");
    run_simulation(c, quiet(dir));
    const auto t = read_csv(dir / "metrics.csv");
    CHECK(t.rows() == 1);
    CHECK(t.at("sigma")[0] == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(fs::exists(dir / "spec.json"));
    CHECK(fs::exists(dir / "config.ini"));
    CHECK(fs::exists(dir / "correlators.csv"));
    // the written configuration reproduces the run
    CHECK(to_text(load_config(dir / "config.ini")) == to_text(c));
}

TEST_CASE("same seed gives identical bytes; another seed does not") {
    omp_set_num_threads(1);
    const auto c = small_config();
    const auto a = scratch("seed_a");
    const auto b = scratch("seed_b");
    run_simulation(c, quiet(a));
    run_simulation(c, quiet(b));
    CHECK(slurp(a / "metrics.csv") == slurp(b / "metrics.csv"));
    CHECK(slurp(a / "correlators.csv") == slurp(b / "correlators.csv"));
    auto other = c;
    other.run.seed = 8;
    const auto d = scratch("seed_c");
    run_simulation(other, quiet(d));
    CHECK(slurp(a / "metrics.csv") != slurp(d / "metrics.csv"));

    const auto t = read_csv(a / "metrics.csv");
    CHECK(t.rows() == 41);
    for (std::size_t k = 0; k < t.rows(); ++k) {
        double s = 0.0;
        for (int i = 0; i < 4; ++i) {
            s += t.at("rho_" + std::to_string(i))[k];
        }
        CHECK(std::abs(s - 1.0) < 1e-10);
    }
}

TEST_CASE("thread count changes values by round-off only") {
    const auto c = small_config(10, 20);
    const auto a = scratch("threads_1");
    const auto b = scratch("threads_4");
    omp_set_num_threads(1);
    run_simulation(c, quiet(a));
    omp_set_num_threads(4);
    run_simulation(c, quiet(b));
    omp_set_num_threads(1);
    CHECK(max_table_difference(read_csv(a / "metrics.csv"), read_csv(b / "metrics.csv")) < 1e-10);
}

TEST_CASE("interrupted run resumes onto the same trajectory") {
    const auto c = small_config(8, 60);
    const auto full = scratch("full");
    run_simulation(c, quiet(full));

    const auto part = scratch("part");
    auto o = quiet(part);
    o.stop_after = 35; // checkpoints every 10 steps
    const auto s1 = run_simulation(c, o);
    CHECK(s1.stopped_early);
    CHECK(fs::exists(part / "checkpoint.bin"));
    o.stop_after = -1;
    o.resume = true;
    const auto s2 = run_simulation(c, o);
    CHECK(s2.resumed);
    CHECK(s2.last_step == 60);
    CHECK(max_table_difference(read_csv(full / "metrics.csv"), read_csv(part / "metrics.csv")) < 1e-12);
    CHECK(max_table_difference(read_csv(full / "correlators.csv"), read_csv(part / "correlators.csv")) < 1e-12);

    // a checkpoint from another configuration is refused
    auto other = c;
    other.delta = 0.2;
    CHECK_THROWS_AS(run_simulation(other, o), ConfigError);
}

TEST_CASE("batch mode isolates seeds") {
    omp_set_num_threads(1);
    const auto c = small_config(6, 10);
    const auto dir = scratch("batch");
    const auto codes = run_batch(c, {3, 4}, 2, quiet(dir));
    CHECK(codes == std::vector<int>{0, 0});
    auto single = c;
    single.run.seed = 4;
    const auto one = scratch("batch_single");
    run_simulation(single, quiet(one));
    CHECK(slurp(dir / "seed_4" / "metrics.csv") == slurp(one / "metrics.csv"));
    CHECK(slurp(dir / "seed_3" / "metrics.csv") != slurp(one / "metrics.csv"));
}

TEST_CASE("spectrum table") {
    auto c = small_config();
    std::ostringstream out;
    write_spectrum(c, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "index,energy,cluster");
    std::vector<double> e;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string idx;
        std::string val;
        std::getline(row, idx, ',');
        std::getline(row, val, ',');
        e.push_back(std::stod(val));
    }
    REQUIRE(e.size() == 4);
    CHECK(e[0] == doctest::Approx(-3.75));
    CHECK(e[1] == doctest::Approx(1.25));
    CHECK(e[3] == doctest::Approx(1.25));
}

TEST_CASE("validation report") {
    auto c = small_config(6);
    const auto r = run_validation(c);
    CHECK(r.passed());
    CHECK(r.chebyshev_vs_exact < 1e-10);
    CHECK(r.partial_trace_vs_dense < 1e-10);
    CHECK(r.bounds_violation <= 0.0);
    // an isotropic uniform coupling commutes with the Heisenberg pair
    c.interaction_family = FamilyKind::Heisenberg;
    const auto iso = run_validation(c);
    CHECK(iso.commutator_sys_int < 1e-12);
    CHECK(iso.commutator_sys_env == 0.0);
    c.interaction_family = FamilyKind::HeisenbergType;
    // narrowed bounds are caught either by the step guard or by the oracle
    bool detected = false;
    try {
        detected = !run_validation(c, 0.3).passed();
    } catch (const SpectralBoundsError&) {
        detected = true;
    }
    CHECK(detected);
    auto big = small_config(11);
    CHECK_THROWS_AS(run_validation(big), BudgetError);
}

TEST_CASE("fit and LDOS reports") {
    auto c = small_config(8, 150);
    c.run.fit = true;
    c.run.ldos = true;
    const auto dir = scratch("reports");
    run_simulation(c, quiet(dir));
    REQUIRE(fs::exists(dir / "fit_report.json"));
    const auto fit = nlohmann::json::parse(slurp(dir / "fit_report.json"));
    CHECK(fit.contains("sigma_exponential"));
    const auto again = run_fit(dir);
    CHECK(again.dump() == fit.dump());
    REQUIRE(fs::exists(dir / "ldos.csv"));
    const auto summary = nlohmann::json::parse(slurp(dir / "ldos_summary.json"));
    CHECK(std::abs(summary["norm"].get<double>() - 1.0) < 1e-3);
    CHECK(std::abs(summary["mean"].get<double>() - summary["expected_mean"].get<double>()) < 1e-6);
}

TEST_CASE("exit codes") {
    CHECK(exit_code_for(ConfigError("x")) == 2);
    CHECK(exit_code_for(ShapeError("x")) == 2);
    CHECK(exit_code_for(BudgetError("x")) == 4);
    CHECK(exit_code_for(SpectralBoundsError("x")) == 3);
    CHECK(exit_code_for(FitError("x")) == 3);
    CHECK(exit_code_for(std::runtime_error("x")) == 1);
}
