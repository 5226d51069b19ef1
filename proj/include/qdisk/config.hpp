#ifndef QDISK_CONFIG_HPP
#define QDISK_CONFIG_HPP

#include <filesystem>
#include <iosfwd>

#include "qdisk/analysis.hpp"

namespace qdisk {

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Validated run configuration: model sequences plus numeric knobs.
struct RunConfig {
  std::optional<PowerLawFamily> family;
  std::optional<ModeContext> model;

  const ModeContext& context() const { return *model; }

  long K = 200;
  long n_min = -20, n_max = 20;
  Tolerances tols;
  std::uint64_t seed = 12345;
  std::filesystem::path out_dir = "out";

  std::vector<std::string> defaulted;  // field names left at their defaults
  std::string description;             // preset name or config path
};

// named presets for the closing example family
RunConfig preset_config(const std::string& name);

// JSON file on disk; unknown keys and malformed values raise config_error
RunConfig load_config(const std::filesystem::path& path);

// flag overrides applied after preset/file loading
struct Overrides {
  std::optional<long> K;
  std::optional<long> n_min, n_max;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
};
void apply_overrides(RunConfig& cfg, const Overrides& ov);

Sequence sequence_from_json_text(const std::string& text);

int cmd_check(const RunConfig& cfg, std::ostream& os);
int cmd_kernel(const RunConfig& cfg, std::ostream& os);
int cmd_verify(const RunConfig& cfg, std::ostream& os);
int cmd_spectrum(const RunConfig& cfg, std::ostream& os);

}  // namespace qdisk

#endif
