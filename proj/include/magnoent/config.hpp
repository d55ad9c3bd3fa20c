#ifndef MAGNOENT_CONFIG_HPP
#define MAGNOENT_CONFIG_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "magnoent/params.hpp"

namespace magnoent {

// One `key = value` line of a config file.
struct KeyValue {
    std::string key;
    std::string value;
    int line = 0;
};

// Parses `key = value` lines; `#` starts a comment, blank lines are skipped.
// Duplicate keys and malformed lines raise ConfigError.
std::vector<KeyValue> parse_key_values(std::istream& in, std::string_view source = "<input>");
std::vector<KeyValue> read_key_values(const std::filesystem::path& path);

// `target = factor * source`, re-evaluated whenever source changes (e.g. in a
// sweep over kappa with G_eff held at 0.55 kappa).
struct ParamLink {
    std::string target;
    double factor = 1.0;
    std::string source;

    bool operator==(const ParamLink&) const = default;
};

/*
 * Parameter set as written in a config file: explicit values plus links.
 *
 * Keys are SystemParams field names. A `_hz` suffix marks a frequency given in
 * Hz (multiplied by 2 pi on load), a `_k` suffix a temperature in kelvin. A
 * bare field name takes SI/angular units, or a link of the form
 * `0.55 * kappa`.
 */
struct ParamConfig {
    SystemParams values = default_params();
    std::vector<ParamLink> links = {{"G_eff", 0.55, "kappa"}};

    // Applies the links to `values` and validates the result.
    SystemParams resolved() const;

    // Assigns `key = value`. Returns false when the key is not a parameter key
    // (the caller decides whether that is an error); throws ConfigError on a
    // recognised key with a bad value.
    bool assign(const std::string& key, const std::string& value);
};

// Applies links in dependency order; cycles or unknown fields raise ConfigError.
void apply_links(SystemParams& p, const std::vector<ParamLink>& links);

// Loads a pure parameter file; unknown keys raise ConfigError.
ParamConfig load_param_config(const std::filesystem::path& path);
ParamConfig param_config_from(const std::vector<KeyValue>& kvs);

// Strict floating-point parse of a whole token; ConfigError on failure.
double parse_number(std::string_view text, std::string_view what);

// Splits on `sep`, trimming whitespace around each piece.
std::vector<std::string> split_trimmed(std::string_view text, char sep);

} // namespace magnoent

#endif
