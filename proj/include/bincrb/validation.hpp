#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bincrb {

struct ValidationCheck {
    std::string name;
    double max_error;
    double tolerance;
    bool passed;
};

/// Deliberate defects for exercising the validation suite itself.
enum class InjectedFault {
    None,
    FlipCrosswindGradient,  // negate dC/dy0 of the plume model
};

/// Built-in oracle checks: analytic vs finite-difference gradients, score vs
/// finite differences of the log-likelihood, likelihood normalization,
/// exact-enumeration information vs the closed form, rho properties.
std::vector<ValidationCheck> run_validation(InjectedFault fault = InjectedFault::None);

bool all_passed(const std::vector<ValidationCheck>& checks);

void print_validation_report(std::ostream& out, const std::vector<ValidationCheck>& checks);

}  // namespace bincrb
