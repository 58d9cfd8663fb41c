#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "clab/config.hpp"

namespace clab {

enum class Stage { check_potential, mollify, construct, certify, carleman, resolvent_sweep, fit, all };

std::string to_string(Stage s);
/// Accepts the subcommand spellings (check-potential, resolvent-sweep, ...).
Stage stage_from_string(const std::string& s);

/// A stage that could not run to completion.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, std::string artifact, const std::string& what)
      : std::runtime_error("stage " + stage + " (" + artifact + "): " + what),
        stage_(std::move(stage)),
        artifact_(std::move(artifact)) {}
  const std::string& stage() const { return stage_; }
  const std::string& artifact() const { return artifact_; }

 private:
  std::string stage_, artifact_;
};

struct StageOutcome {
  Stage stage = Stage::all;
  bool requested = false;  // false for prerequisites pulled in by a later stage
  bool assertion = false;  // stage asserts a property (fit does not)
  bool passed = true;
  std::vector<std::string> artifacts;
  std::string summary;
};

struct PipelineResult {
  std::vector<StageOutcome> stages;
  std::string config_hash;
  /// 0, or 1 if a requested assertion stage failed.
  int exit_code() const;
};

/// Runs the requested stage with its prerequisites (check-potential before the
/// construction stages, resolvent-sweep before fit), writing artifacts into
/// out_dir. Throws ConfigError for configuration problems and StageError for
/// stages that fail to run.
PipelineResult run_pipeline(const ExperimentConfig& cfg, Stage stage, const std::string& out_dir,
                            std::ostream* log = nullptr);

}  // namespace clab
