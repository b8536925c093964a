#include <doctest.h>

#include <string>

#include <pjb/errors.hpp>
#include <pjb/scenario.hpp>

using namespace pjb;

namespace {

const std::string nakazi = R"({
  "name": "nakazi",
  "factors": [{"zeros": [0, 0]}],
  "hardy": {"num_vars": 1, "degree_cap": 6},
  "inner_generator": {"per_var": [{"zeros": [0]}]},
  "subspace": {"factorization": {"eta": {"zeros": [0]}, "phi": {"zeros": [0]}}},
  "action": "decompose"
})";

std::string parse_message(const std::string& text, const RunOptions& opts = {}) {
  try {
    run_scenario(text, opts);
  } catch (const error& e) {
    CHECK(e.code() == errc::parse_error);
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("a decompose scenario names the generator and factor") {
  const RunResult r = run_scenario(nakazi);
  CHECK(r.exit_code == 0);
  CHECK(r.report.find("\"name\": \"z\"") != std::string::npos);
  CHECK(r.report.find("\"factor\": \"(z,z)\"") != std::string::npos);
  CHECK(r.report.find("\"schema_version\": 1") != std::string::npos);
}

TEST_CASE("reports are reproducible and independent of the job count") {
  const std::string text = R"({
    "factors": [{"zeros": [0, 0]}, {"zeros": [0, 0]}],
    "seed": 3,
    "subspaces": {
      "a": {"factorizations": [{"eta": {"zeros": [0]}, "phi": {"zeros": [0]}}, {"eta": {"zeros": []}, "phi": {"zeros": [0, 0]}}]},
      "b": {"factorizations": [{"eta": {"zeros": []}, "phi": {"zeros": [0, 0]}}, {"eta": {"zeros": [0]}, "phi": {"zeros": [0]}}]}
    },
    "actions": [{"type": "decompose", "subspace": "a"}, {"type": "equiv", "left": "a", "right": "b"},
                {"type": "verify-lemmas", "theta": {"zeros": [0.2, -0.4]}, "trials": 3}]
  })";
  const RunResult one = run_scenario(text);
  CHECK(one.report == run_scenario(text).report);
  CHECK(one.report == run_scenario(text, {.seed = std::nullopt, .tolerances = {}, .jobs = 4}).report);
  CHECK(one.report != run_scenario(text, {.seed = 4, .tolerances = {}, .jobs = 1}).report);
}

TEST_CASE("input errors carry a location") {
  CHECK(parse_message(R"({"factors": [{"zeros": [0, "x"]}], "action": "check"})").find("/factors/0/zeros/1") !=
        std::string::npos);
  CHECK(parse_message(R"({"factors": [{"zeros": [0]}], "colour": 1, "action": "check"})").find("/colour") !=
        std::string::npos);
  CHECK(parse_message("{\n\"name\": \"x\"\n\"factors\": []}").find("line 3") != std::string::npos);
  CHECK(parse_message(R"({"factors": [{"zeros": [1.5]}], "action": "check"})").find("/factors/0/zeros/0") !=
        std::string::npos);
  CHECK(parse_message(R"({"factors": [{"zeros": [0]}], "action": "dance"})").find("/action/type") !=
        std::string::npos);
}

TEST_CASE("tolerance overrides are bounded below") {
  CHECK(parse_message(R"({"tolerances": {"invariance": 1e-13}, "action": "verify-lemmas", "factors": [{"zeros": [0]}]})")
            .find("/tolerances/invariance") != std::string::npos);
  CHECK_FALSE(parse_message(nakazi, {.seed = std::nullopt, .tolerances = {{"window", 1e-13}}, .jobs = 1}).empty());
  CHECK_FALSE(parse_message(nakazi, {.seed = std::nullopt, .tolerances = {{"bogus", 1e-3}}, .jobs = 1}).empty());
  CHECK(run_scenario(nakazi, {.seed = std::nullopt, .tolerances = {{"window", 1e-12}}, .jobs = 1}).exit_code == 0);
}

TEST_CASE("module failures become error records") {
  const RunResult r = run_scenario(R"({"action": {"type": "verify-lemmas", "theta": {"zeros": []}}})");
  CHECK(r.exit_code == 1);
  CHECK(r.report.find("\"code\": \"Precondition\"") != std::string::npos);

  const RunResult expected = run_scenario(R"({
    "factors": [{"zeros": [0, 0]}, {"zeros": [0, 0]}],
    "subspace": {"vectors": [[0, 1, 1, 0], [0, 0, 0, 1]]},
    "actions": [{"type": "decompose", "expect_error": "NotDoublyCommuting"},
                {"type": "check", "expect": {"doubly_commuting": false}}]
  })");
  CHECK(expected.exit_code == 0);
}
