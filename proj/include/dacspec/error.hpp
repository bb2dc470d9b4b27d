#pragma once

#include <stdexcept>
#include <string>

namespace dacspec {

// Error categories; the CLI maps each category to a stable exit code.
enum class errc {
    parse_error,            // malformed input file or document
    missing_input,          // required file/flag absent
    invalid_argument,       // precondition violation on an API call
    no_peak,                // spectrum carries no usable peak
    not_converged,          // iterative fit hit its cap
    singular,               // normal equations not invertible at the solution
    out_of_range,           // feature/parameter outside a gauge or EOS window
    extrapolation_refused,  // query outside a calibrated range
    non_monotone,           // calibration energies not increasing with pressure
    duplicate_pressure,     // repeated pressure node in a calibration
    too_few_points,         // not enough data to construct/fit
};

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const { return code_; }

private:
    errc code_;
};

// Exit-code contract: 0 success, 2 input/parse, 3 fit failure,
// 4 range/extrapolation, 5 calibration construction.
inline int exit_code_for(errc c) {
    switch (c) {
        case errc::parse_error:
        case errc::missing_input:
        case errc::invalid_argument:
            return 2;
        case errc::no_peak:
        case errc::not_converged:
        case errc::singular:
            return 3;
        case errc::out_of_range:
        case errc::extrapolation_refused:
            return 4;
        case errc::non_monotone:
        case errc::duplicate_pressure:
        case errc::too_few_points:
            return 5;
    }
    return 1;
}

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::parse_error: return "ParseError";
        case errc::missing_input: return "MissingInput";
        case errc::invalid_argument: return "InvalidArgument";
        case errc::no_peak: return "NoPeak";
        case errc::not_converged: return "NotConverged";
        case errc::singular: return "Singular";
        case errc::out_of_range: return "OutOfRange";
        case errc::extrapolation_refused: return "ExtrapolationRefused";
        case errc::non_monotone: return "NonMonotone";
        case errc::duplicate_pressure: return "DuplicatePressure";
        case errc::too_few_points: return "TooFewPoints";
    }
    return "Error";
}

}  // namespace dacspec
