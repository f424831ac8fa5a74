#pragma once

#include <string>

#include "occtrack/gan.hpp"
#include "occtrack/pipeline.hpp"

namespace occtrack {

/// Tracker and trainer settings parsed from one JSON document. Every field
/// is optional and defaults to the built-in value; unknown fields in known
/// sections are rejected. Malformed input raises ValidationError.
struct ToolConfig {
    PipelineConfig pipeline;
    GanTrainConfig gan;
};

ToolConfig config_from_json(const std::string& text);
std::string config_to_json(const ToolConfig& cfg);
ToolConfig load_config(const std::string& path);

}  // namespace occtrack
