#pragma once

// JSON documents for ScoringConfig and ParticipantProfile, and the config
// digest stamped into log headers and run manifests.

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "vreal/participant_sim.hpp"
#include "vreal/scoring.hpp"

namespace vreal {

/// Every field is written; keys are sorted, so dump() is canonical.
nlohmann::json to_json(const ScoringConfig& config);
nlohmann::json to_json(const ParticipantProfile& profile);

/// Missing keys keep their defaults; unknown keys and ill-typed values throw
/// ConfigError. The result is validated.
ScoringConfig scoring_config_from_json(const nlohmann::json& doc);
ParticipantProfile profile_from_json(const nlohmann::json& doc);

/// Lowercase hex SHA-256 of the canonical JSON of the effective config.
std::string config_hash(const ScoringConfig& config);

std::string sha256_hex(std::string_view bytes);

/// Raised by the file helpers; the message names the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad JSON in a file throws ConfigError.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace vreal
