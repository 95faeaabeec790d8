#pragma once

#include <stdexcept>
#include <string>

namespace hypercut {

enum class ErrorKind { domain, capacity, numeric, resolution, range, config, usage };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline const char* kind_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::capacity: return "capacity";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::resolution: return "resolution";
    case ErrorKind::range: return "range";
    case ErrorKind::config: return "config";
    case ErrorKind::usage: return "usage";
    }
    return "unknown";
}

} // namespace hypercut
