#pragma once

// JSON run configurations and the runner behind the command-line tool.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "phasespace/aharonov_bohm.hpp"
#include "phasespace/error.hpp"

namespace phasespace {

enum class ScenarioKind { Free, Electric, Magnetic, GaugeCheck, PropertySuite };
enum class FormalismChoice { Wigner, SegalBargmann, Both };

std::string to_string(ScenarioKind k);

/// A single packet under H = p^2 / 2m.
struct FreeScenario {
  double packet_center = -3.0;
  double momentum = 2.0;
  double packet_width = 1.0;
  double box_half_width = 16.0;
  std::size_t grid_points = 128;
  double t_final = 1.0;
  std::size_t samples = 16;
  std::size_t sb_truncation = 128;
};

/// Random smooth gauge functions applied to the electric or magnetic scenario.
struct GaugeCheckConfig {
  ScenarioKind base = ScenarioKind::Electric;
  std::size_t count = 10;
  std::uint64_t seed = 1;
};

struct RunConfig {
  ScenarioKind kind = ScenarioKind::Electric;
  PhysicalConstants consts{};
  FormalismChoice formalism = FormalismChoice::Both;
  std::string out_dir = "out";
  Sampling sampling{};
  ElectricScenario electric{};
  MagneticScenario magnetic{};
  FreeScenario free{};
  GaugeCheckConfig gauge{};

  std::vector<Formalism> formalisms() const;
};

/// Flat JSON object. "scenario" is required; everything else has a default
/// except the parameters that define the chosen scenario (electric: tau and
/// dphi or phi_1; magnetic: field and tau). Malformed JSON raises ParseError
/// with the line; unknown, misplaced or invalid fields raise ValidationError
/// naming the field.
RunConfig parse_config(const std::string& text);

/// Reads and parses a file; an unreadable file is a ParseError.
RunConfig load_config(const std::filesystem::path& path);

inline constexpr int kExitOk = 0;
inline constexpr int kExitChecksFailed = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

/// 2 for configuration and precondition errors, 3 for numerical admission
/// failures.
int exit_status(ErrorCode code);

struct RunReport {
  int exit_code = kExitOk;
  nlohmann::json summary;
  /// Error text when exit_code is not 0.
  std::string message;
};

/// Runs the configuration and writes result.json, timeseries.csv and the frame
/// files into out (created if needed). Everything is computed before the first
/// file is written and every file is renamed into place, so a failed run leaves
/// no files behind.
RunReport run(const RunConfig& config, const std::filesystem::path& out);

/// Runs the configuration once per value of one field. Each run writes into
/// out/<field>_<index>; out/sweep.csv collects one row per run and formalism.
RunReport sweep(const std::string& config_text, const std::string& field, const std::vector<double>& values,
                const std::filesystem::path& out);

}  // namespace phasespace
