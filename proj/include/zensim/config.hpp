#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace zensim {

// Invalid configuration (unknown key, unparsable value, missing required key). Exit code 2.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& key, const std::string& what)
        : std::runtime_error(key.empty() ? what : key + ": " + what), key_(key) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

struct KeySpec {
    std::string key;
    std::string default_value;   // "auto" = experiment-specific, "" = required/empty
    std::string help;
};

const std::vector<KeySpec>& config_keys();

// Flat dotted key/value configuration. Only registered keys are accepted.
class Config {
public:
    Config();

    void set(const std::string& key, const std::string& value);
    // "key=value" override.
    void set_assignment(const std::string& assignment);
    bool has(const std::string& key) const;
    bool is_auto(const std::string& key) const;

    std::string get_string(const std::string& key) const;
    double get_double(const std::string& key) const;
    // Value or `fallback` when the key is "auto".
    double get_double(const std::string& key, double fallback) const;
    long get_int(const std::string& key) const;
    long get_int(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key) const;
    std::vector<double> get_list(const std::string& key) const;

    // Resolved text, one "key = value" per line, sorted; parse_config_text(to_text()) round-trips.
    std::string to_text() const;
    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

Config parse_config_text(const std::string& text, Config base = Config());
Config load_config_file(const std::string& path, Config base = Config());

} // namespace zensim
