#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mcgraph {

// Which stage a failure belongs to. The CLI maps these to exit codes.
enum class ErrorKind {
    usage,      // bad parameters or unreadable input
    data,       // input is well-formed but unusable for the requested computation
    numerical,  // an iterative solver failed
};

enum class ErrorCode {
    invalid_weight,
    self_loop_rejected,
    parse_error,
    count_overflow,
    no_convergence,
    zero_matrix,
    all_eigenvalues_zero,
    too_many_references,
    dimension_error,
    empty_input,
    non_finite_feature,
    invalid_argument,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::invalid_weight: return "InvalidWeight";
    case ErrorCode::self_loop_rejected: return "SelfLoopRejected";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::count_overflow: return "CountOverflow";
    case ErrorCode::no_convergence: return "NoConvergence";
    case ErrorCode::zero_matrix: return "ZeroMatrix";
    case ErrorCode::all_eigenvalues_zero: return "AllEigenvaluesZero";
    case ErrorCode::too_many_references: return "TooManyReferences";
    case ErrorCode::dimension_error: return "DimensionError";
    case ErrorCode::empty_input: return "EmptyInput";
    case ErrorCode::non_finite_feature: return "NonFiniteFeature";
    case ErrorCode::invalid_argument: return "InvalidArgument";
    }
    return "Unknown";
}

constexpr ErrorKind kind_of(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::invalid_weight:
    case ErrorCode::self_loop_rejected:
    case ErrorCode::parse_error:
    case ErrorCode::dimension_error:
    case ErrorCode::invalid_argument:
        return ErrorKind::usage;
    case ErrorCode::no_convergence:
    case ErrorCode::count_overflow:
        return ErrorKind::numerical;
    default:
        return ErrorKind::data;
    }
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }
    ErrorKind kind() const noexcept { return kind_of(code_); }

private:
    ErrorCode code_;
};

} // namespace mcgraph
