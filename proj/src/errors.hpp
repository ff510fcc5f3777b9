#ifndef ABE_ERRORS_HPP
#define ABE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace abe {

enum class ErrorCode {
    invalid_argument = 1,
    dimension_mismatch = 2,
    domain = 3,            // parameter left the valid natural-parameter domain
    unsupported = 4,       // operation not available for this path/config
    optimization = 5,      // scalar search failed to bracket a minimum
    nonfinite = 6,         // non-finite intermediate (density ratio overflow)
    config = 7,            // config file / CLI parse problem
    io = 8,
    step_failure = 9,      // estimation step aborted; message carries step index
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
    if (!cond) fail(code, what);
}

} // namespace abe

#endif
