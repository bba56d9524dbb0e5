#pragma once

#include <stdexcept>
#include <string>

namespace hmorrey {

// Process exit codes used by the command line tool.
enum class ExitCode : int {
    ok = 0,
    validation = 1,
    divergence = 2,
    io = 3,
    usage = 64,
};

class Error : public std::runtime_error {
public:
    Error(const std::string& what, ExitCode code) : std::runtime_error(what), code_(code) {}
    ExitCode code() const noexcept { return code_; }
    virtual const char* category() const noexcept = 0;

private:
    ExitCode code_;
};

#define HMORREY_ERROR(Name, tag, exit_code)                                  \
    class Name : public Error {                                              \
    public:                                                                  \
        explicit Name(const std::string& what) : Error(what, exit_code) {}   \
        const char* category() const noexcept override { return tag; }       \
    };

HMORREY_ERROR(InputError, "input", ExitCode::validation)
HMORREY_ERROR(ConfigError, "configuration", ExitCode::validation)
HMORREY_ERROR(DomainError, "domain", ExitCode::validation)
HMORREY_ERROR(SingularityError, "singularity", ExitCode::validation)
HMORREY_ERROR(HypothesisError, "hypothesis", ExitCode::validation)
HMORREY_ERROR(DivergenceError, "divergence", ExitCode::divergence)
HMORREY_ERROR(PrecisionError, "precision", ExitCode::divergence)
HMORREY_ERROR(ConvergenceError, "convergence", ExitCode::divergence)
HMORREY_ERROR(ResourceError, "resource", ExitCode::divergence)
HMORREY_ERROR(IoError, "io", ExitCode::io)

#undef HMORREY_ERROR

}  // namespace hmorrey
