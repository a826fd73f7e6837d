#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "pencil/compat.hpp"
#include "pencil/simulator.hpp"

namespace pencil::cli {

enum class Mode {
  CheckBracket,
  CheckCompat,
  CheckIntegrability,
  BuildCanonical,
  Reconstruct,
  Flow,
  Simulate,
  Involution,
};

std::string_view mode_name(Mode m);

struct SimulationSpec {
  std::size_t m = 256;
  double dt = 1e-3;
  std::size_t steps = 100;
  int flow = 1;
  std::vector<FourierSeries> initial;
  std::size_t snapshot_every = 0;
  /// When set, a functional drifting more than this is a violation.
  std::optional<double> drift_tolerance;
};

/// A validated problem. Exactly one of `canonical` and `bracket` is set;
/// `eta` accompanies a bracket in the modes that need the constant bracket.
struct ProblemSpec {
  Mode mode = Mode::CheckBracket;
  std::size_t nvars = 0;
  std::optional<CanonicalData> canonical;
  std::optional<HydroBracket> bracket;
  std::optional<ConstantBracket> eta;
  std::optional<SimulationSpec> simulation;
  std::uint64_t seed = 1;
  std::size_t samples = 4;
};

/// Parse failure located by a JSON path such as $.canonical.F[1][0].exps.
class SpecError : public Error {
 public:
  SpecError(ErrorCode code, std::string path, const std::string& message);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Throws SpecError (Schema, NonSymmetricEta or SingularEta).
ProblemSpec parse_spec(std::string_view text);

enum class Status { Pass, Fail, Error };

std::string_view status_name(Status s);

struct Report {
  Status status = Status::Pass;
  std::string mode;
  nlohmann::ordered_json violations = nlohmann::ordered_json::array();
  nlohmann::ordered_json artifacts = nlohmann::ordered_json::object();
  std::string error_code;
  std::string error_message;
  std::string error_path;
  double seconds = 0.0;

  /// 0 pass, 1 fail, 2 error.
  int exit_code() const;
};

struct RunOptions {
  /// simulate: the conservation series goes here when non-empty.
  std::string csv_path;
  /// Replaces the seed given in the problem text (run_text only).
  std::optional<std::uint64_t> seed;
};

/// Never throws for module errors; they become status "error" with the
/// module's error code.
Report run(const ProblemSpec& spec, const RunOptions& options = {});

/// parse_spec + run, with parse failures reported as status "error".
Report run_text(std::string_view text, const RunOptions& options = {});

enum class Format { Json, Text };

/// Timing is left out unless asked for, so that reports compare bytewise.
std::string render(const Report& r, Format f, bool with_timing = false);

}  // namespace pencil::cli
