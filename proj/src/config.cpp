#include "opsent/config.hpp"

#include <nlohmann/json.hpp>

namespace opsent {

OutputFormat output_format_from_string(const std::string& s) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    if (s == "jsonl") return OutputFormat::Jsonl;
    throw ValidationError("format must be csv, json or jsonl");
}

std::string to_string(OutputFormat f) {
    switch (f) {
        case OutputFormat::Csv: return "csv";
        case OutputFormat::Json: return "json";
        case OutputFormat::Jsonl: return "jsonl";
    }
    return "?";
}

RunConfig RunConfig::from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("config must be a JSON object");

    RunConfig config;
    for (const auto& item : j.items()) {
        const std::string& key = item.key();
        if (key == "tolerances") {
            if (!item.value().is_object())
                throw ValidationError("tolerances must be a JSON object");
            for (const auto& tol : item.value().items()) {
                const double v = tol.value().get<double>();
                if (!(v > 0.0))
                    throw ValidationError("tolerance \"" + tol.key() +
                                          "\" must be strictly positive");
                if (tol.key() == "rank")
                    config.tolerances.rank = v;
                else if (tol.key() == "tangle")
                    config.tolerances.tangle = v;
                else if (tol.key() == "zero_norm")
                    config.tolerances.zero_norm = v;
                else
                    throw ValidationError("unknown tolerance \"" + tol.key() + "\"");
            }
        } else if (key == "format") {
            config.format = output_format_from_string(item.value().get<std::string>());
        } else if (key == "output") {
            config.output = item.value().get<std::string>();
        } else if (key == "seed") {
            config.seed = item.value().get<std::uint64_t>();
        } else if (key == "threads") {
            config.threads = item.value().get<int>();
            if (config.threads < 1) throw ValidationError("threads must be >= 1");
        } else {
            throw ValidationError("unknown config key \"" + key + "\"");
        }
    }
    return config;
}

}  // namespace opsent
