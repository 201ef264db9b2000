#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace socialsim {

// Runtime model errors. The CLI maps these to exit code 3.
struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZeroLikelihoodError : ModelError {
    using ModelError::ModelError;
};

struct ZeroProbabilityActionError : ModelError {
    using ModelError::ModelError;
};

struct UnsupportedDimensionError : ModelError {
    using ModelError::ModelError;
};

struct CausalityViolationError : ModelError {
    using ModelError::ModelError;
};

struct InvalidAgentError : ModelError {
    using ModelError::ModelError;
};

struct MissingBeliefError : ModelError {
    using ModelError::ModelError;
};

struct NotAchievableError : ModelError {
    NotAchievableError(const std::string& msg, std::vector<int> violating_nodes)
        : ModelError(msg), violating(std::move(violating_nodes)) {}
    // Indices j with w_n(j) != 0 but no direct edge (j, n).
    std::vector<int> violating;
};

struct TooLargeError : ModelError {
    using ModelError::ModelError;
};

struct NotAbsorbingError : ModelError {
    using ModelError::ModelError;
};

struct InvalidDiscountError : ModelError {
    using ModelError::ModelError;
};

struct InvalidNormalizerError : ModelError {
    using ModelError::ModelError;
};

struct ShapeMismatchError : ModelError {
    using ModelError::ModelError;
};

// Configuration errors. The CLI maps these to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : ConfigError {
    using ConfigError::ConfigError;
};

// Carries every violated precondition, not just the first.
struct ValidationError : ConfigError {
    explicit ValidationError(std::vector<std::string> issue_list)
        : ConfigError(join(issue_list)), issues(std::move(issue_list)) {}

    std::vector<std::string> issues;

  private:
    static std::string join(const std::vector<std::string>& list) {
        std::string out = "invalid configuration:";
        for (const auto& s : list) {
            out += "\n  - ";
            out += s;
        }
        return out;
    }
};

}  // namespace socialsim
