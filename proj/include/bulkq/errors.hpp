#pragma once

#include <stdexcept>
#include <string>

namespace bulkq {

// Error taxonomy shared by model validation, the PGF algebra and the solver
// pipeline. Each failure mode gets its own code so callers (CLI, tests) can
// react without string matching.
enum class errc {
    non_stochastic,      // a pmf does not sum to 1
    unstable,            // traffic intensity rho >= 1
    bad_threshold,       // service thresholds violate 1 <= a <= b
    out_of_range,        // batch size outside [a, b]
    unsupported_order,   // phase-type order above the exact-expansion limit
    degree_overflow,     // polynomial degree above the configured cap
    pole_evaluation,     // rational function evaluated at a pole
    root_count_mismatch, // unit-disk root count != b
    ill_conditioned,     // ambiguous root clustering / repeated in-disk root
    non_cancellation,    // numerator fails to vanish at an in-disk root
    singular_system,     // boundary linear system numerically singular
    negative_probability,
    degenerate_vacation, // h_0 >= 1
    mass_leak,           // arbitrary-epoch total mass far from 1
    mixed_config,        // merging incompatible simulation reports
    bad_input,           // malformed document / argument
};

const char* errc_name(errc c);

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    errc code() const { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) { throw Error(code, what); }

} // namespace bulkq
