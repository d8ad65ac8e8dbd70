#pragma once

#include <stdexcept>
#include <string>

namespace passprob {

// Exit-code contract: 0 success, 2 schema error, 3 missing prerequisite,
// 4 numerical failure.
class PipelineError : public std::runtime_error {
public:
    PipelineError(std::string msg, int exit_code)
        : std::runtime_error(std::move(msg)), exit_code_(exit_code) {}
    int exit_code() const noexcept { return exit_code_; }

private:
    int exit_code_;
};

class SchemaError : public PipelineError {
public:
    explicit SchemaError(const std::string& msg) : PipelineError(msg, 2) {}
};

class MissingPrerequisiteError : public PipelineError {
public:
    explicit MissingPrerequisiteError(const std::string& msg) : PipelineError(msg, 3) {}
};

class NumericalError : public PipelineError {
public:
    explicit NumericalError(const std::string& msg) : PipelineError(msg, 4) {}
};

}  // namespace passprob
