#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "meissner/atom.hpp"
#include "meissner/field.hpp"
#include "meissner/linearized.hpp"
#include "meissner/sensitivity.hpp"

// Command implementations behind the `meissner` executable. Each command
// writes its machine-readable result to `out` and human-readable text to
// `err`, and returns a process exit code.

namespace meissner::cli {

enum ExitCode : int { exit_ok = 0, exit_validation_failed = 1, exit_config_error = 2, exit_io_error = 3 };

/// Bad or unknown configuration entry; `key()` is "section.key" when known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, const std::string& message)
      : std::runtime_error(key.empty() ? message : key + ": " + message), key_(key) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything a command can be configured with. Defaults are the reference
/// configuration: R0 = 1 cm, lambda = 0.01 R0, B0x = B0y = 5e-5 T, an 87Rb
/// atom anchored at (2, 2) cm, 780 nm light along x and t = 160 ms.
struct RunConfig {
  double r0 = 0.01;
  double lambda = 1e-4;
  BackgroundField b0{5e-5, 5e-5};
  AtomParams atom;
  PulseSequence pulses = default_pulses();
  AnchorPoint anchor{0.02, 0.02};
  double gz = constants::standard_gravity;
  AccelerationUncertainty dg{1e-8, 1e-8};
  GammaConvention convention = GammaConvention::closed_form;
  InversionLimits limits;
  FieldMapGrid grid{-0.03, 0.03, -0.03, 0.03, 201, 201};

  CylinderGeometry geometry() const { return {r0, lambda}; }
  static PulseSequence default_pulses();
};

/// INI text with sections [geometry], [field], [atom], [interferometer] and
/// [grid]; SI units. Unknown sections or keys and unparsable values throw
/// ConfigError; so do values that fail the domain checks.
RunConfig parse_config(std::istream& in);
/// Throws IoError when the file cannot be read.
RunConfig load_config(const std::string& path);
void validate_config(const RunConfig& cfg);

struct CommandOptions {
  std::optional<std::string> config_path;
  std::optional<std::string> out_dir;  // current directory when unset
  bool fast = false;
};

/// Header x,y,Bx,By,region; values at 17 significant digits, rows in
/// field_map order.
void write_field_map_csv(std::ostream& out, const std::vector<FieldSample>& samples);

int cmd_field_map(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_phase(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sensitivity(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_validate(const CommandOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace meissner::cli
