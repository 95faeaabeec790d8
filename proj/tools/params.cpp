#include "params.hpp"

#include "hypercut/error.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

namespace hypercut::cli {

namespace {

bool same_kind(const json& want, const json& got) {
    if (want.is_number_float()) return got.is_number();
    if (want.is_number_integer()) return got.is_number_integer();
    if (want.is_array()) {
        if (!got.is_array()) return false;
        for (const auto& v : got)
            if (!v.is_number()) return false;
        return true;
    }
    return want.type() == got.type();
}

} // namespace

ParamSet::ParamSet(std::string command, std::vector<Param> params)
    : command_(std::move(command)), params_(std::move(params)) {
    values_ = json::object();
    for (const auto& p : params_) values_[p.name] = p.value;
}

void ParamSet::attach(CLI::App& sub) {
    for (const auto& p : params_) {
        std::string def = p.value.is_string() ? p.value.get<std::string>() : p.value.dump();
        if (p.value.is_array()) {
            def.clear();
            for (std::size_t i = 0; i < p.value.size(); ++i) def += (i ? "," : "") + p.value[i].dump();
        }
        std::string flag = p.name;
        std::replace(flag.begin(), flag.end(), '_', '-');
        options_[p.name] = sub.add_option("--" + flag, raw_[p.name], p.help + " [default: " + def + "]");
    }
}

json ParamSet::parse_flag(const std::string& name, const std::string& text) const {
    const json& want = values_.at(name);
    try {
        if (want.is_boolean()) {
            if (text == "true" || text == "1") return true;
            if (text == "false" || text == "0") return false;
            throw std::invalid_argument("not a boolean");
        }
        if (want.is_string()) return text;
        if (want.is_array()) {
            json arr = json::array();
            std::stringstream ss(text);
            std::string item;
            while (std::getline(ss, item, ',')) {
                std::size_t used = 0;
                double v = std::stod(item, &used);
                if (used != item.size()) throw std::invalid_argument("trailing characters");
                arr.push_back(v);
            }
            return arr;
        }
        std::size_t used = 0;
        if (want.is_number_integer()) {
            long long v = std::stoll(text, &used);
            if (used != text.size()) throw std::invalid_argument("trailing characters");
            return v;
        }
        double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        fail(ErrorKind::usage, "--" + name + ": cannot parse '" + text + "'");
    }
}

void ParamSet::resolve(const json& config) {
    if (!config.is_null()) {
        if (!config.is_object()) fail(ErrorKind::config, "config must be a JSON object");
        for (auto it = config.begin(); it != config.end(); ++it) {
            if (it.key() == "command") {
                if (it.value() != command_) fail(ErrorKind::config, "config is for command " + it.value().dump());
                continue;
            }
            if (it.key() == "seed") continue;
            if (!values_.contains(it.key())) fail(ErrorKind::config, "unknown config key '" + it.key() + "'");
            if (!same_kind(values_[it.key()], it.value()))
                fail(ErrorKind::config, "config key '" + it.key() + "' has the wrong type");
            values_[it.key()] = it.value();
        }
    }
    for (const auto& [name, opt] : options_)
        if (opt->count()) values_[name] = parse_flag(name, raw_[name]);
}

double ParamSet::num(const std::string& k) const { return values_.at(k).get<double>(); }
std::int64_t ParamSet::integer(const std::string& k) const { return values_.at(k).get<std::int64_t>(); }
bool ParamSet::flag(const std::string& k) const { return values_.at(k).get<bool>(); }
std::string ParamSet::str(const std::string& k) const { return values_.at(k).get<std::string>(); }
std::vector<double> ParamSet::list(const std::string& k) const { return values_.at(k).get<std::vector<double>>(); }

std::string config_hash(const json& config) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : config.dump()) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

} // namespace hypercut::cli
