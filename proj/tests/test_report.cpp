#include "doctest.h"
#include "mumford/report.hpp"

using namespace mumford;

namespace {

Json tate_config() {
    return Json::parse(R"({
        "name": "tate",
        "field": {"residue_prime": 7, "precision": 20, "cover_degree": 2},
        "generators": [[[-1, 0], [0, 1]], [[51, -100], [2, -51]]],
        "truncation": {"max_word_length": 8, "tail": 10, "theta_box": 6},
        "seed": 3,
        "tasks": ["check-schottky", "periods"]
    })");
}

}  // namespace

TEST_CASE("config parsing") {
    const RunConfig c = parse_config(tate_config());
    CHECK(c.field.q == 7);
    CHECK(c.generators.size() == 2);
    CHECK(c.generators[1] == std::vector<std::string>{"51", "-100", "2", "-51"});
    CHECK(c.tasks.size() == 2);
    CHECK(c.seed == 3);

    Json bad = tate_config();
    bad["colour"] = 1;
    CHECK_THROWS_AS(parse_config(bad), ConfigError);
    bad = tate_config();
    bad["tasks"] = {"nonsense"};
    CHECK_THROWS_WITH_AS(parse_config(bad), "unknown task 'nonsense'", ConfigError);
    bad = tate_config();
    bad["generators"][0] = {1, 2, 3};
    CHECK_THROWS_AS(parse_config(bad), ConfigError);
    bad = tate_config();
    bad.erase("field");
    CHECK_THROWS_AS(parse_config(bad), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("task lists") {
    CHECK(parse_task_list("").empty());
    CHECK(parse_task_list("curve,periods") == std::vector<std::string>{"curve", "periods"});
    CHECK_THROWS_AS(parse_task_list("curve,bogus"), ConfigError);
}

TEST_CASE("invalid groups surface as config errors") {
    Json j = tate_config();
    j["field"]["residue_prime"] = 6;
    CHECK_THROWS_WITH_AS(build_configured_group(parse_config(j)), "residue_prime must be prime", ConfigError);
    j = tate_config();
    j["generators"][1] = Json::parse(R"([["1/0", 0], [0, 1]])");
    CHECK_THROWS_AS(build_configured_group(parse_config(j)), ConfigError);
}

TEST_CASE("run and render") {
    RunConfig c = parse_config(tate_config());
    c.tasks = {};
    const RunResult empty = run(c);
    CHECK(empty.pass);
    CHECK(empty.report.at("tasks").empty());
    CHECK(empty.report.at("header").at("genus") == 1);

    c = parse_config(tate_config());
    const RunResult r = run(c);
    CHECK(r.pass);
    CHECK(r.report.at("tasks").size() == 2);
    const std::string text = render_text(r);
    CHECK(text.find("== check-schottky: PASS") != std::string::npos);
    CHECK(Json::parse(render_json(r)) == r.report);
    CHECK(render_json(run(c)) == render_json(r));
}
