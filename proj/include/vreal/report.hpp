#pragma once

// Plain-text session report: one "label: value" line per score and telemetry
// field, fixed ordering, seconds to two decimals, LF line endings.

#include <string>

#include "vreal/scoring.hpp"
#include "vreal/session_log.hpp"

namespace vreal {

std::string export_report(const TaskScorecard& scorecard, const Telemetry& telemetry);

/// Seconds rendered with exactly two decimals in the C locale.
std::string format_seconds(double s);

/// The scorecard as JSON (for `--format json`).
std::string scorecard_json(const TaskScorecard& scorecard, int indent = 2);

}  // namespace vreal
