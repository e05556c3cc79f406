#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "opsent/entanglement.hpp"

namespace opsent {

enum class OutputFormat { Csv, Json, Jsonl };

OutputFormat output_format_from_string(const std::string& s);
std::string to_string(OutputFormat f);

// Run-wide configuration. Field precedence is flag > config file > default;
// the OPSENT_THREADS environment variable overrides the thread count last.
struct RunConfig {
    Tolerances tolerances;
    std::optional<OutputFormat> format;
    std::optional<std::string> output;
    std::uint64_t seed = 0;
    int threads = 1;

    // Parse from a JSON config file. Unknown keys are rejected; tolerances
    // must be strictly positive.
    static RunConfig from_json_text(const std::string& text);
};

}  // namespace opsent
