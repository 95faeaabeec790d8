#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace hypercut::cli {

using json = nlohmann::json;

// One typed experiment parameter; the default fixes the JSON type accepted from files and flags.
struct Param {
    std::string name;
    json value;
    std::string help;
};

class ParamSet {
public:
    ParamSet(std::string command, std::vector<Param> params);

    // Registers --name flags (underscores as hyphens) on the subcommand; values are parsed after CLI11 finishes.
    void attach(CLI::App& sub);
    // Applies a config object, then explicitly given flags. Unknown keys raise a config error.
    void resolve(const json& config);

    const std::string& command() const noexcept { return command_; }
    const json& values() const noexcept { return values_; }
    double num(const std::string& k) const;
    std::int64_t integer(const std::string& k) const;
    bool flag(const std::string& k) const;
    std::string str(const std::string& k) const;
    std::vector<double> list(const std::string& k) const;

private:
    json parse_flag(const std::string& name, const std::string& text) const;

    std::string command_;
    std::vector<Param> params_;
    json values_;
    std::map<std::string, std::string> raw_;
    std::map<std::string, CLI::Option*> options_;
};

// Stable 64-bit FNV-1a hash of the canonical config dump, as 16 hex digits.
std::string config_hash(const json& config);

} // namespace hypercut::cli
