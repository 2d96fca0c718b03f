#pragma once

#include <stdexcept>
#include <string>

namespace mhdsim {

struct InvalidField : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct GridMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct GapViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateMap : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EllipticDivergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IncompatibleData : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CompatibilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct StabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoContraction : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InsufficientHistory : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace mhdsim
