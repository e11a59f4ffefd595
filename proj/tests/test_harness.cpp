#include "doctest.h"

#include "swapqueue/harness.hpp"
#include "swapqueue/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

using namespace swapqueue;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
    auto dir = fs::temp_directory_path() / "swapqueue_harness_tests";
    fs::create_directories(dir);
    return dir;
}

std::size_t count_lines(const std::string& text) {
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

std::size_t column(const CsvTable& t, const std::string& name) {
    const auto it = std::find(t.header.begin(), t.header.end(), name);
    REQUIRE(it != t.header.end());
    return static_cast<std::size_t>(it - t.header.begin());
}

} // namespace

TEST_CASE("empty config yields defaults") {
    const auto cfg = parse_config_text("");
    CHECK(cfg.repeater.n_connections == 5);
    CHECK(cfg.repeater.gamma == 0.0);
    CHECK(cfg.repeater.h == 0.2);
    CHECK(cfg.repeater.horizon == 10000);
    CHECK(cfg.repeater.seed == 42);
    CHECK(cfg.repeater.loss_mode == LossMode::Deterministic);
    CHECK(cfg.policy.kind == Policy::MaxWeight);
    CHECK(c1(cfg.repeater.arrival_probs) == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("config range errors name the key") {
    try {
        (void)parse_config_text("gamma = 1.5\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "gamma");
        CHECK(std::string(e.what()).find("gamma") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config_text("arrival_prob = 2"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("horizon = 0"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("policy = greedy"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("delay_periods = -1"), ConfigError);
}

TEST_CASE("config parse errors carry line numbers") {
    try {
        (void)parse_config_text("n = 4\n# comment\n\nbogus = 1\n");
        FAIL("expected ConfigParseError");
    } catch (const ConfigParseError& e) {
        CHECK(e.line() == 4);
        CHECK(e.key() == "bogus");
    }
    try {
        (void)parse_config_text("n = 4\nthis is not a pair\n");
        FAIL("expected ConfigParseError");
    } catch (const ConfigParseError& e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse_config_text("n = 4\nn = 5\n"), ConfigParseError);
    CHECK_THROWS_AS(parse_config_text("n = four"), ConfigParseError);
}

TEST_CASE("config values map onto the repeater") {
    const auto cfg = parse_config_text(
        "n = 5\ngamma = 0.2   # noisy\nloss_mode = binomial\npolicy = delayed\ndelay_periods = 3\n"
        "arrival_prob = 0.1\nseed = 123\ncycle_time = 0.5\ncycles_per_period = 4\n");
    CHECK(cfg.repeater.gamma == 0.2);
    CHECK(cfg.repeater.loss_mode == LossMode::Binomial);
    CHECK(cfg.policy.kind == Policy::Delayed);
    CHECK(cfg.policy.delay_periods == 3);
    CHECK(cfg.repeater.seed == 123);
    CHECK(cfg.repeater.arrival_probs(4, 4) == 0.1);
    CHECK(period_length(cfg.repeater.cycles_per_period, cfg.repeater.cycle_time) == 2.0);

    Rng rng(0);
    CHECK(losses_for_period(cfg.repeater.gamma, cfg.repeater.n_connections, LossMode::Deterministic, rng) == 1);
}

TEST_CASE("arrival probabilities from a matrix file") {
    const auto dir = scratch_dir();
    {
        std::ofstream f(dir / "probs.csv");
        f << "0.1,0.2\n0.3,0.0\n";
    }
    {
        std::ofstream f(dir / "run.cfg");
        f << "n = 2\narrival_probs_file = probs.csv\n";
    }
    const auto cfg = parse_config(dir / "run.cfg");
    CHECK(cfg.repeater.arrival_probs(0, 1) == 0.2);
    CHECK(cfg.repeater.arrival_probs(1, 0) == 0.3);

    CHECK_THROWS_AS(parse_config_text("n = 3\narrival_probs_file = probs.csv\n", dir), ConfigError);
    CHECK_THROWS_AS(parse_config_text("n = 2\narrival_probs_file = missing.csv\n", dir), IoError);
    CHECK_THROWS_AS(parse_config(dir / "no_such.cfg"), IoError);
    CHECK_THROWS_AS(parse_config_text("arrival_prob = 0.1\narrival_probs_file = probs.csv\n", dir), ConfigError);
}

TEST_CASE("format_number uses decimal notation with 12 significant digits") {
    CHECK(format_number(1.0) == "1");
    CHECK(format_number(1.2) == "1.2");
    CHECK(format_number(1e8) == "100000000");
    CHECK(format_number(39.0 / 7.0) == "5.57142857143");
    CHECK(format_number(1328.0 / 35.0) == "37.9428571429");
    CHECK(format_number(1e-5) == "0.00001");
    CHECK(format_number(-2.5) == "-2.5");
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(0.7999996964572581) == "0.799999696457");
}

TEST_CASE("emit_csv line counts") {
    const auto dir = scratch_dir();
    CsvTable t{{"a", "b"}, {}};
    emit_csv(t, dir / "empty.csv");
    CHECK(read_file(dir / "empty.csv") == "a,b\n");

    t.rows = {{"1", "2"}, {"3", "4"}, {"5", "6"}};
    emit_csv(t, dir / "three.csv");
    const auto text = read_file(dir / "three.csv");
    CHECK(count_lines(text) == 4);
    CHECK(text.find('\r') == std::string::npos);

    CHECK_THROWS_AS(emit_csv(t, dir / "no_such_dir" / "x.csv"), IoError);
}

TEST_CASE("csv round trip over random tables") {
    std::mt19937_64 gen(17);
    const std::string alphabet = "ab,\"\n\r x1.";
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1), len(0, 6), width(1, 5), height(0, 6);
    for (int trial = 0; trial < 300; ++trial) {
        CsvTable t;
        const auto w = width(gen);
        auto cell = [&] {
            std::string s;
            for (std::size_t j = len(gen); j > 0; --j) s.push_back(alphabet[pick(gen)]);
            return s;
        };
        for (std::size_t c = 0; c < w; ++c) t.header.push_back("h" + cell());
        for (std::size_t r = height(gen); r > 0; --r) {
            std::vector<std::string> row;
            for (std::size_t c = 0; c < w; ++c) row.push_back(cell());
            // A lone empty field would serialize as an empty line.
            if (w == 1 && row[0].empty()) row[0] = "x";
            t.rows.push_back(row);
        }
        REQUIRE(parse_csv(to_csv(t)) == t);
    }
}

TEST_CASE("grids") {
    const auto pis = LinearGrid{1.0, 10.0, 0.25}.points();
    CHECK(pis.size() == 37);
    CHECK(pis.back() == 10.0);
    const auto hs = LinearGrid{0.0, 1.0, 0.025}.points();
    CHECK(hs.size() == 41);
    CHECK(hs.back() == doctest::Approx(1.0).epsilon(1e-15));
    const auto bs = LogGrid{}.points();
    CHECK(bs.size() == 201);
    CHECK(bs.front() == 1.0);
    CHECK(bs.back() == 1e8);
}

TEST_CASE("analytic scenario spot values") {
    HarnessConfig cfg;
    ScenarioSpec spec;

    spec.name = ScenarioName::Fig3a;
    auto t = run_scenario(spec, cfg);
    CHECK(t.header == std::vector<std::string>{"pi_s", "h", "pi_s_star"});
    CHECK(t.rows.size() == 37 * 41);
    CHECK(t.rows.front() == std::vector<std::string>{"1", "0", "1"});

    spec.name = ScenarioName::Fig3b;
    t = run_scenario(spec, cfg);
    CHECK(t.rows.size() == 41 * 10);
    for (const auto& r : fig3b_rows(spec)) {
        if (std::fabs(r.h - 0.2) < 1e-12 && r.n == 5) CHECK(r.f_gamma == doctest::Approx(12.0).epsilon(1e-14));
    }

    spec.name = ScenarioName::Fig4a;
    t = run_scenario(spec, cfg);
    CHECK(t.rows.size() == 201 * 3);
    CHECK(t.rows[0] == std::vector<std::string>{"1", "perfect", "5"});
    CHECK(t.rows[1] == std::vector<std::string>{"1", "complete", "5.57142857143"});
    CHECK(t.rows[2] == std::vector<std::string>{"1", "noncomplete", "37.9428571429"});

    spec.name = ScenarioName::Fig4b;
    t = run_scenario(spec, cfg);
    const auto& last = t.rows.back();
    CHECK(last[0] == "100000000");
    CHECK(last[1] == "noncomplete");
    CHECK(std::fabs(std::stod(last[2]) - 0.8) < 1e-4);
}

TEST_CASE("stability scenario rows") {
    HarnessConfig cfg;
    cfg.repeater.n_connections = 3;
    cfg.repeater.arrival_probs = uniform_probs(3, 0.2);
    cfg.repeater.horizon = 200;
    ScenarioSpec spec;
    spec.name = ScenarioName::Stability;
    spec.replications = 2;
    const auto t = run_scenario(spec, cfg);
    const auto type = column(t, "row_type");
    std::size_t periods = 0, bins = 0, summaries = 0, aggregates = 0;
    for (const auto& r : t.rows) {
        periods += r[type] == "period";
        bins += r[type] == "drift_bin";
        summaries += r[type] == "summary";
        aggregates += r[type] == "aggregate";
        CHECK(r[column(t, "replications")] == "2");
    }
    CHECK(periods == 400);
    CHECK(bins == 20);
    CHECK(summaries == 2);
    CHECK(aggregates == 1);
    const auto& summary = *std::find_if(t.rows.begin(), t.rows.end(),
                                        [&](const auto& r) { return r[type] == "summary"; });
    CHECK(summary[column(t, "bound_status")] == "ok");
    CHECK(summary[column(t, "seed")] == "42");
}

TEST_CASE("stability scenario reports inadmissible load as no bound") {
    HarnessConfig cfg;
    cfg.repeater.n_connections = 2;
    cfg.repeater.arrival_probs = uniform_probs(2, 0.9);
    cfg.repeater.horizon = 50;
    ScenarioSpec spec;
    spec.name = ScenarioName::Stability;
    const auto t = run_scenario(spec, cfg);
    CHECK(t.rows.back()[column(t, "bound_status")] == "no_bound");
}

TEST_CASE("compare scenario covers every policy") {
    HarnessConfig cfg;
    cfg.repeater.n_connections = 3;
    cfg.repeater.arrival_probs = uniform_probs(3, 0.2);
    cfg.repeater.horizon = 300;
    ScenarioSpec spec;
    spec.name = ScenarioName::Compare;
    spec.replications = 3;
    const auto t = run_scenario(spec, cfg);
    CHECK(t.rows.size() == 3 * 3 + 3);
    const auto policy = column(t, "policy");
    CHECK(t.rows[9][policy] == "maxweight");
    CHECK(t.rows[10][policy] == "random");
    CHECK(t.rows[11][policy] == "delayed");
    CHECK(t.rows[9][column(t, "maxweight_wins_fraction")] == "1");
}

TEST_CASE("scenario names") {
    CHECK(parse_scenario_name("fig4b") == ScenarioName::Fig4b);
    CHECK_THROWS_AS(parse_scenario_name("fig5"), ConfigError);
    CHECK(replication_seed(42, 3) == 45);
}

TEST_CASE("scenario spec validation") {
    ScenarioSpec spec;
    spec.replications = 0;
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec.replications = 1;
    spec.n_min = 3;
    spec.n_max = 2;
    CHECK_THROWS_AS(spec.validate(), ConfigError);
}
