#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace langford {

/// A named parameter constraint does not hold (e.g. a family builder
/// called with c != -b). The message names the violated constraint.
class ConstraintError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file or string; message carries file/field context.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Integration failed: nonfinite state or step budget exhausted.
/// Carries the last accepted time and state.
class BlowUpError : public std::runtime_error {
public:
    BlowUpError(const std::string& what, double t_last, std::array<double, 3> state_last)
        : std::runtime_error(what), t_last(t_last), state_last(state_last) {}

    double t_last;
    std::array<double, 3> state_last;
};

}  // namespace langford
