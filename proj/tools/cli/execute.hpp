#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "escort/rays.hpp"
#include "escort/spider.hpp"
#include "escort/thurston.hpp"
#include "runspec.hpp"

namespace escort::cli {

inline constexpr const char* kWordEncoding = "signed-id-v1";

enum ExitCode : int { kSuccess = 0, kValidationFailure = 2, kNumericalFailure = 3, kInconclusive = 4 };

struct SpiderPayload {
  std::vector<Leg> legs;
  std::vector<LabeledPoint> points;
  std::optional<Real> rho;
};

struct RunReport {
  std::string command;
  std::vector<nlohmann::json> records;  // deterministic given spec and seed
  std::vector<std::vector<RayPoint>> rays;
  std::optional<std::vector<StepReport>> history;
  std::optional<SpiderPayload> spider;
  double wall_seconds = 0;  // not part of the records
  int exit_code = kSuccess;
};

RunReport execute(const RunSpec& spec);

enum class Format { Records, Csv, Svg };

Format parse_format(std::string_view name);

/// Writes the report into `dir` and returns the files written. Throws
/// Error(Validation) for svg on a report with no ray, spider or convergence payload.
std::vector<std::filesystem::path> emit(const RunReport& report, Format format, const std::filesystem::path& dir);

}  // namespace escort::cli
