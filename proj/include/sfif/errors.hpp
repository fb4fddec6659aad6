#pragma once

#include <stdexcept>
#include <string>

namespace sfif {

enum class errc {
    non_increasing_abscissae,
    gamma_out_of_range,
    gamma_collision,
    kappa_out_of_range,
    alphabet_mismatch,
    point_out_of_domain,
    digit_out_of_range,
    address_digit_out_of_range,
    point_budget_exceeded,
    insufficient_samples,
    degenerate_range,
    not_applicable,
    domain_mismatch,
    grid_too_coarse,
    non_positive_gamma,
    singular_denominator,
    condition_violated,
    kappa_unsupported,
    infeasible_order,
    join_up_violation,
    parse_error,
    io_error,
};

// Validation errors reject bad input (CLI exit 2); computation errors abort
// an operation on input that validated fine (CLI exit 3).
enum class error_kind { validation, computation };

inline const char* errc_name(errc c) {
    switch (c) {
    case errc::non_increasing_abscissae: return "NonIncreasingAbscissae";
    case errc::gamma_out_of_range:       return "GammaOutOfRange";
    case errc::gamma_collision:          return "GammaCollision";
    case errc::kappa_out_of_range:       return "KappaOutOfRange";
    case errc::alphabet_mismatch:        return "AlphabetMismatch";
    case errc::point_out_of_domain:      return "PointOutOfDomain";
    case errc::digit_out_of_range:       return "DigitOutOfRange";
    case errc::address_digit_out_of_range: return "AddressDigitOutOfRange";
    case errc::point_budget_exceeded:    return "PointBudgetExceeded";
    case errc::insufficient_samples:     return "InsufficientSamples";
    case errc::degenerate_range:         return "DegenerateRange";
    case errc::not_applicable:           return "NotApplicable";
    case errc::domain_mismatch:          return "DomainMismatch";
    case errc::grid_too_coarse:          return "GridTooCoarse";
    case errc::non_positive_gamma:       return "NonPositiveGamma";
    case errc::singular_denominator:     return "SingularDenominator";
    case errc::condition_violated:       return "ConditionViolated";
    case errc::kappa_unsupported:        return "KappaUnsupported";
    case errc::infeasible_order:         return "InfeasibleOrder";
    case errc::join_up_violation:        return "JoinUpViolation";
    case errc::parse_error:              return "ParseError";
    case errc::io_error:                 return "IoError";
    }
    return "UnknownError";
}

inline error_kind errc_kind(errc c) {
    switch (c) {
    case errc::non_increasing_abscissae:
    case errc::gamma_out_of_range:
    case errc::gamma_collision:
    case errc::kappa_out_of_range:
    case errc::alphabet_mismatch:
    case errc::point_out_of_domain:
    case errc::digit_out_of_range:
    case errc::address_digit_out_of_range:
    case errc::join_up_violation:
    case errc::parse_error:
    case errc::io_error:
        return error_kind::validation;
    default:
        return error_kind::computation;
    }
}

class Error : public std::runtime_error {
public:
    Error(errc c, const std::string& detail)
        : std::runtime_error(std::string(errc_name(c)) +
                             (detail.empty() ? "" : ": " + detail)),
          code_(c) {}

    errc code() const { return code_; }
    error_kind kind() const { return errc_kind(code_); }
    const char* name() const { return errc_name(code_); }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc c, const std::string& detail = "") {
    throw Error(c, detail);
}

} // namespace sfif
