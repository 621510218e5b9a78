#pragma once

#include <string>
#include <utility>
#include <vector>

namespace qubobench {

/// Line-oriented `key = value` configuration grouped into [section] blocks.
/// Values may be comma-separated lists; key order within the file is
/// preserved (sweep grids expand in that order). `#` starts a comment line.
struct ConfigSection {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;

    const std::string* find(const std::string& key) const;
};

struct Config {
    std::vector<ConfigSection> sections;

    const ConfigSection* find(const std::string& name) const;
};

/// Throws ConfigError on malformed input.
Config parse_config(const std::string& text);

std::vector<std::string> split_list(const std::string& value);

}  // namespace qubobench
