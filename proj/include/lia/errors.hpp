#ifndef LIA_ERRORS_HPP
#define LIA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lia {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : SolverError {
    int line, col;
    ParseError(const std::string& msg, int line_, int col_)
        : SolverError(msg + " at " + std::to_string(line_) + ":" + std::to_string(col_)),
          line(line_), col(col_) {}
};

struct UnsupportedFeature : SolverError {
    using SolverError::SolverError;
};

struct ResourceLimit : SolverError {
    using SolverError::SolverError;
};

struct TimeoutError : SolverError {
    TimeoutError() : SolverError("timeout") {}
};

struct TrackMismatch : SolverError {
    using SolverError::SolverError;
};

struct NotCoprime : SolverError {
    using SolverError::SolverError;
};

struct UndefinedSubstitution : SolverError {
    using SolverError::SolverError;
};

}  // namespace lia

#endif
