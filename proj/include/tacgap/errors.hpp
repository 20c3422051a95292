#ifndef TACGAP_ERRORS_HPP
#define TACGAP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tacgap {

// Error categories map 1:1 onto CLI exit codes (see tools/tacgap).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace tacgap

#endif
