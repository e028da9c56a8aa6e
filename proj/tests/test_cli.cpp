#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "escort/error.hpp"
#include "execute.hpp"
#include "runspec.hpp"

using namespace escort;
using namespace escort::cli;

namespace {

const char* kSolveSpec =
    "command = solve\n"
    "degree = 1\n"
    "address = seq:[0,1,1,0,1,0,0,1,1,0,0,1]\n"
    "potential = raw:2\n"
    "numeric_depth = 8\n"
    "total_depth = 12\n";

const char* kTraceSpec =
    "# d=1 ray\n"
    "command = trace-ray\n"
    "degree = 1\n"
    "address = seq:[0,1,1,0,1,0,0,1,1,0,0,1]\n"
    "potential = raw:2\n"
    "t_hi = raw:6\n"
    "count = 8\n";

ErrorKind kind_of(std::string_view text, std::string* message = nullptr) {
  try {
    parse_spec(text);
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.kind();
  }
  FAIL("spec parsed");
  return ErrorKind::InvalidArgument;
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("escort_test_cli_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string first_line(const std::filesystem::path& file) {
  std::ifstream in(file);
  std::string line;
  std::getline(in, line);
  return line;
}

}  // namespace

TEST_CASE("minimal trace-ray spec") {
  const auto spec = parse_spec(kTraceSpec);
  CHECK(spec.command == "trace-ray");
  CHECK(spec.degree == 1);
  REQUIRE(spec.addresses.size() == 1);
  CHECK(spec.addresses[0].depth() == 12);
  CHECK(spec.potentials.size() == 1);
  CHECK(spec.count == 8);
  CHECK(spec.map_polynomial() == MonicPolynomial({Complex(0)}));
}

TEST_CASE("validation errors") {
  std::string msg;
  SUBCASE("potential below the minimal potential") {
    CHECK(kind_of("command = trace-ray\ndegree = 1\naddress = seq:[1,100,100000,1000000000]\npotential = raw:1\n", &msg) ==
          ErrorKind::Validation);
    CHECK(msg.find("minimal_potential") != std::string::npos);
  }
  SUBCASE("unknown command lists the valid ones") {
    CHECK(kind_of("command = fly\ndegree = 1\n", &msg) == ErrorKind::Validation);
    for (const auto& c : kCommands) CHECK(msg.find(c) != std::string::npos);
  }
  SUBCASE("malformed line carries its number") {
    CHECK(kind_of("command = solve\ndegree two\n", &msg) == ErrorKind::Parse);
    CHECK(msg.find('2') != std::string::npos);
  }
  SUBCASE("every problem is listed") {
    CHECK(kind_of("command = solve\ndegree = 2\npolynomial = coeffs:[0,0]\ncount = 1\n", &msg) ==
          ErrorKind::Validation);
    CHECK(msg.find("; ") != std::string::npos);
  }
}

TEST_CASE("print and parse round trip") {
  for (const char* text : {kSolveSpec, kTraceSpec}) {
    const auto spec = parse_spec(text);
    CHECK(parse_spec(print_spec(spec)) == spec);
  }
  auto d2 = parse_spec(
      "command = clusters\ndegree = 2\npolynomial = coeffs:[0,0,-2,0]\n"
      "address = seq:[0,0,0,1,0,1,1,0,1,0,0,1,0,1,1,0]\naddress = seq:[0,0,0,-1,1,0,0,1,1,0,1,0,0,1,0,1]\n"
      "potential = raw:0.4\npotential = raw:0.4\ntolerance = 0.1\nseed = 7\n");
  CHECK(parse_spec(print_spec(d2)) == d2);
}

TEST_CASE("solve report") {
  const auto report = execute(parse_spec(kSolveSpec));
  CHECK(report.exit_code == kSuccess);
  REQUIRE(report.history);
  CHECK(!report.history->empty());
  CHECK(report.records.front()["type"] == "run");
  CHECK(report.records.front()["word_encoding"] == kWordEncoding);
  bool solution = false;
  std::size_t forward = 0;
  for (const auto& r : report.records) {
    if (r["type"] == "solution") {
      solution = true;
      CHECK(r["converged"] == true);
      CHECK(r.contains("coefficients"));
    }
    if (r["type"] == "forward_check") ++forward;
  }
  CHECK(solution);
  CHECK(forward == 1);
}

TEST_CASE("verify-bounds with no samples") {
  auto spec = parse_spec("command = verify-bounds\ndegree = 2\nsamples = 0\n");
  const auto report = execute(spec);
  CHECK(report.exit_code == kSuccess);
  REQUIRE(report.records.size() == 2);
  CHECK(report.records[0]["type"] == "run");
  CHECK(report.records[1]["type"] == "bounds_setup");
}

TEST_CASE("records are deterministic for a seed") {
  const auto spec = parse_spec("command = verify-bounds\ndegree = 2\nsamples = 3\nseed = 9\n");
  const auto a = execute(spec);
  const auto b = execute(spec);
  CHECK(a.records == b.records);
  auto other = spec;
  other.seed = 10;
  CHECK(execute(other).records != a.records);
}

TEST_CASE("numerical failures carry a diagnosis") {
  // Depth 4 leaves no room for a trace at depth 8.
  const auto report = execute(parse_spec(
      "command = trace-ray\ndegree = 1\naddress = seq:[0,1,1,0]\npotential = raw:2\ntrace_depth = 8\n"));
  CHECK(report.exit_code == kValidationFailure);
  CHECK(report.records.back()["type"] == "diagnosis");
}

TEST_CASE("emit") {
  SUBCASE("records") {
    const auto dir = scratch("records");
    const auto report = execute(parse_spec(kTraceSpec));
    const auto files = emit(report, Format::Records, dir);
    REQUIRE(files.size() == 1);
    std::ifstream in(files[0]);
    std::size_t lines = 0;
    for (std::string line; std::getline(in, line);) {
      CHECK(nlohmann::json::parse(line).is_object());
      ++lines;
    }
    CHECK(lines == report.records.size());
  }
  SUBCASE("csv headers") {
    const auto dir = scratch("csv");
    emit(execute(parse_spec(kTraceSpec)), Format::Csv, dir);
    CHECK(first_line(dir / "ray.csv") == "t_level,t_base,re,im,residual");
    emit(execute(parse_spec(kSolveSpec)), Format::Csv, dir);
    CHECK(first_line(dir / "convergence.csv") == "iteration,displacement,ratio,residual");
  }
  SUBCASE("empty report still has headers") {
    const auto dir = scratch("empty");
    RunReport empty;
    empty.command = "trace-ray";
    empty.rays.emplace_back();
    emit(empty, Format::Csv, dir);
    std::ifstream in(dir / "ray.csv");
    std::stringstream all;
    all << in.rdbuf();
    CHECK(all.str() == "t_level,t_base,re,im,residual\n");
  }
  SUBCASE("svg") {
    const auto dir = scratch("svg");
    const auto files = emit(execute(parse_spec(kTraceSpec)), Format::Svg, dir);
    REQUIRE(!files.empty());
    CHECK(first_line(files[0]).find("<svg") != std::string::npos);
    RunReport bare;
    bare.command = "classify";
    CHECK_THROWS_AS(emit(bare, Format::Svg, dir), Error);
  }
  SUBCASE("format names") {
    CHECK(parse_format("records") == Format::Records);
    CHECK(parse_format("csv") == Format::Csv);
    CHECK(parse_format("svg") == Format::Svg);
    CHECK_THROWS_AS(parse_format("pdf"), Error);
  }
}
