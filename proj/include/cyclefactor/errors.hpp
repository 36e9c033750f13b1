#pragma once

#include <stdexcept>
#include <string>

namespace cyclefactor {

// Process exit codes, shared between the library error types and the CLI.
enum class ExitCode : int {
    ok = 0,
    parse = 2,
    infeasible_spec = 3,
    capability = 4,
    stage_failure = 5,
    verification_failure = 6,
};

class Error : public std::runtime_error {
public:
    Error(std::string stage, const std::string& what, ExitCode code = ExitCode::stage_failure)
        : std::runtime_error(what), stage_(std::move(stage)), code_(code) {}
    const std::string& stage() const { return stage_; }
    ExitCode code() const { return code_; }

private:
    std::string stage_;
    ExitCode code_;
};

// Violated input contract (strict-mode gates, malformed arguments).
class PreconditionError : public Error {
public:
    PreconditionError(std::string stage, const std::string& what)
        : Error(std::move(stage), what, ExitCode::infeasible_spec) {}
};

// A guarantee cannot be met at this instance size.
class InfeasibleError : public Error {
public:
    InfeasibleError(std::string stage, const std::string& what)
        : Error(std::move(stage), what, ExitCode::infeasible_spec) {}
};

// A requested feature has no configured provider.
class CapabilityError : public Error {
public:
    CapabilityError(std::string stage, const std::string& what)
        : Error(std::move(stage), what, ExitCode::capability) {}
};

// A search stage ran out of candidates.
class NotFoundError : public Error {
public:
    NotFoundError(std::string stage, const std::string& what)
        : Error(std::move(stage), what, ExitCode::stage_failure) {}
};

// Internal consistency check; throwing one of these is a bug, not bad input.
inline void require(bool cond, const char* stage, const std::string& msg) {
    if (!cond) throw Error(stage, std::string("internal invariant violated: ") + msg);
}

}  // namespace cyclefactor
