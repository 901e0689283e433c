#pragma once

#include <string>

#include "snrml/harness.h"

namespace snrml {

// Flat JSON object with exactly the ExperimentConfig fields; unknown keys
// and type mismatches raise ConfigError. Fields absent from the object keep
// their defaults.
ExperimentConfig config_from_json(const std::string& text);

// Full echo of every field, stable key order, round-trips through
// config_from_json without change.
std::string config_to_json(const ExperimentConfig& cfg);

// Curve artifact: {"config": ..., "notes": [...], "points": [...]}.
std::string curve_to_json(const NmseCurve& curve);

// Single-trial artifact with truths, estimates and per-window diagnostics.
std::string trace_to_json(const TraceResult& trace);

}  // namespace snrml
