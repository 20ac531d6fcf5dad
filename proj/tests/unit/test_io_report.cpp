#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "sbp/commands.hpp"
#include "sbp/report.hpp"

using namespace sbp;
using io::Json;

namespace {

const std::string data_dir = SBP_DATA_DIR;

std::string data(const char* name) { return data_dir + "/" + name; }

io::OperatorInput read_input(const char* name) {
  return io::operator_input_from_json(io::read_json_file(data(name)), 16);
}

}  // namespace

TEST_CASE("rationals travel as exact strings") {
  CHECK(io::to_json(Rational(-2, 4)) == "-1/2");
  CHECK(io::to_json(Rational(3)) == "3");
  CHECK(io::rational_from_json("6/4", "x") == Rational(3, 2));
  CHECK_THROWS_AS(io::rational_from_json("1/0", "x"), io::InputError);
  CHECK_THROWS_AS(io::rational_from_json(Json(2), "x"), io::InputError);
  CHECK_THROWS_WITH_AS(io::matrix_from_json(Json::parse(R"([["1","2"],["3","x"]])"), "matrix"),
                       doctest::Contains("row 2 column 2"), io::InputError);
}

TEST_CASE("support sets are 1-based atom lists") {
  const SupportSet s = SupportSet::from_atoms({1, 3});
  CHECK(io::to_json(s) == Json::parse("[1,3]"));
  CHECK(io::support_from_json(io::to_json(s), 3, "s") == s);
  CHECK_THROWS_AS(io::support_from_json(Json::parse("[4]"), 3, "s"), io::InputError);
  CHECK_THROWS_AS(io::support_from_json(Json::parse("[0]"), 3, "s"), io::InputError);
}

TEST_CASE("operator input files") {
  const io::OperatorInput m = read_input("averaging.json");
  CHECK(m.op == make_averaging(3, {SupportSet::from_atoms({1, 2}), SupportSet::from_atoms({3})}));
  CHECK(m.norm == NormSpec::unweighted("1", 3));
  CHECK(io::operator_input_from_json(io::to_json(m), 16) == m);

  const Json bare = Json::parse(R"({"matrix": [["1","0"],["0","1"]]})");
  CHECK(io::operator_input_from_json(bare, 16).norm == NormSpec::unweighted("2", 2));
  CHECK_THROWS_AS(io::operator_input_from_json(bare, 1), BudgetExceeded);
  CHECK_THROWS_AS(io::operator_input_from_json(io::read_json_file(data("mismatch.json")), 16), io::InputError);
  CHECK_THROWS_AS(io::operator_input_from_json(io::read_json_file(data("bad_rational.json")), 16), io::InputError);
  const Json short_weights = Json::parse(R"({"norm": {"p": "2", "weights": ["1"]}, "matrix": [["1","0"],["0","1"]]})");
  CHECK_THROWS_AS(io::operator_input_from_json(short_weights, 16), io::InputError);
  const Json bad_p = Json::parse(R"({"norm": {"p": "1/2"}, "matrix": [["1"]]})");
  CHECK_THROWS_AS(io::operator_input_from_json(bad_p, 16), io::InputError);
}

TEST_CASE("analysis of the averaging matrix") {
  const AnalysisReport r = analyze(read_input("averaging.json"));
  CHECK(r.classification() == "weighted conditional expectation operator");
  CHECK(r.sbp.holds);
  CHECK(r.scp.holds);
  CHECK(r.projection);
  REQUIRE(r.decomposition.has_value());
  CHECK(r.decomposition->matrix() == r.input.op.matrix());
  CHECK(r.minimal_supports == std::vector<SupportSet>{SupportSet::from_atoms({1, 2}), SupportSet::from_atoms({3})});
  REQUIRE(r.closures.has_value());
  CHECK(r.closures->intersection_closed);
  CHECK(r.operator_norm.equals(1));
}

TEST_CASE("analysis of Q") {
  const AnalysisReport r = analyze(read_input("q.json"));
  CHECK(r.classification() == "not a weighted conditional expectation operator");
  REQUIRE_FALSE(r.sbp.holds);
  CHECK(r.sbp.witness->f == unit_vector(2, 1));
  CHECK(r.sbp.witness->g == unit_vector(2, 0));
  CHECK(r.scp.holds);
  CHECK(r.projection);
  CHECK(r.operator_norm == NormValue::exact(1));
  CHECK_FALSE(r.decomposition.has_value());
}

TEST_CASE("analysis reports round-trip losslessly") {
  for (const char* name : {"averaging.json", "q.json", "random8.json"}) {
    const AnalysisReport r = analyze(read_input(name));
    const Json j = to_json(r);
    CHECK(analysis_report_from_json(j) == r);
    CHECK(io::dump(to_json(analysis_report_from_json(Json::parse(io::dump(j))))) == io::dump(j));
  }
}

TEST_CASE("inconsistent analysis reports are rejected") {
  const Json good = to_json(analyze(read_input("averaging.json")));
  Json no_form = good;
  no_form["decomposition"] = nullptr;
  CHECK_THROWS_AS(analysis_report_from_json(no_form), io::InputError);
  Json wrong_label = good;
  wrong_label["classification"] = "not a weighted conditional expectation operator";
  CHECK_THROWS_AS(analysis_report_from_json(wrong_label), io::InputError);
  Json old_schema = good;
  old_schema["schema"] = 2;
  CHECK_THROWS_AS(analysis_report_from_json(old_schema), io::InputError);
  Json no_witness = to_json(analyze(read_input("q.json")));
  no_witness["predicates"]["SBP"]["witness"] = nullptr;
  CHECK_THROWS_AS(analysis_report_from_json(no_witness), io::InputError);
}

TEST_CASE("interval input files match the built-in examples") {
  CHECK(io::frop_from_json(io::read_json_file(data("ex1.json")), "input") == build_example_ex1());
  CHECK(io::frop_from_json(io::read_json_file(data("ex3.json")), "input") == build_example_ex3());
  CHECK_THROWS_WITH_AS(io::frop_from_json(io::read_json_file(data("gap.json")), "input"),
                       doctest::Contains("not contiguous"), io::InputError);
}

TEST_CASE("interval reports") {
  const IntervalReport r1 = analyze_interval(build_example_ex1());
  CHECK(r1.sbp.holds);
  REQUIRE_FALSE(r1.scp.holds);
  const Json j1 = to_json(r1);
  CHECK(j1["SCP"]["witness"]["psi_f"] == Json::parse(R"(["0", "1/96"])"));
  CHECK(j1["rank_bound"] == 2);
  CHECK(interval_report_from_json(j1) == r1);

  const IntervalReport r3 = analyze_interval(build_example_ex3());
  CHECK(to_json(r3)["range_supports"] == Json::parse(R"([[], [["0", "1"]]])"));
  CHECK(interval_report_from_json(to_json(r3)) == r3);
}

TEST_CASE("probe reports round-trip") {
  ProbeOptions options;
  options.budget = 200;
  const ProbeReport report = probe_charscp(options);
  REQUIRE_FALSE(report.findings.empty());
  const Json j = io::to_json(report);
  CHECK(j["options"]["dims"] == Json::parse("[2, 3]"));
  const ProbeReport back = io::probe_report_from_json(j);
  CHECK(back.findings == report.findings);
  CHECK(back.examined == report.examined);
  for (const ProbeFinding& f : back.findings) CHECK(reverify(f));
}

TEST_CASE("commands map failures to exit codes") {
  std::ostringstream out;
  std::ostringstream err;
  cli::AnalyzeConfig analyze_config;
  analyze_config.input = data("q.json");
  CHECK(cli::cmd_analyze(analyze_config, out, err) == cli::kSuccess);
  CHECK(analysis_report_from_json(Json::parse(out.str())).projection);

  analyze_config.input = data("bad_rational.json");
  CHECK(cli::cmd_analyze(analyze_config, out, err) == cli::kInputError);
  CHECK(err.str().find("row 2 column 2") != std::string::npos);

  analyze_config.input = data("averaging.json");
  analyze_config.max_atoms = 2;
  CHECK(cli::cmd_analyze(analyze_config, out, err) == cli::kBudgetExceeded);
  analyze_config.max_atoms = 0;
  CHECK(cli::cmd_analyze(analyze_config, out, err) == cli::kInputError);

  cli::IntervalConfig interval_config;
  interval_config.input = data("gap.json");
  CHECK(cli::cmd_interval(interval_config, out, err) == cli::kInputError);

  cli::ProbeConfig probe_config;
  probe_config.p = "inf";
  probe_config.dims = "2..3";
  probe_config.budget = 10;
  probe_config.out = "unused.json";
  CHECK(cli::cmd_probe(probe_config, out, err) == cli::kInputError);
  probe_config.p = "1";
  probe_config.dims = "0..3";
  CHECK(cli::cmd_probe(probe_config, out, err) == cli::kInputError);
}

TEST_CASE("thread count comes from SBP_THREADS") {
  ::setenv("SBP_THREADS", "3", 1);
  CHECK(cli::threads_from_env() == 3);
  ::setenv("SBP_THREADS", "zero", 1);
  CHECK(cli::threads_from_env() >= 1);
  ::unsetenv("SBP_THREADS");
  CHECK(cli::threads_from_env() >= 1);
}
