#pragma once

#include <iosfwd>

#include "moebiuslab/report.hpp"

namespace moebiuslab {

namespace exit_code {
inline constexpr int kPass = 0;
inline constexpr int kNegative = 1;
inline constexpr int kIndeterminate = 2;
inline constexpr int kUsage = 2;
inline constexpr int kInternal = 3;
}  // namespace exit_code

/// Tolerances applied by `verify`.
struct VerifyTolerances {
    double trace_b = 1e-10;
    double norm_b = 1e-8;
    double trace_psi = 1e-7;
    double structure = 1e-6;
    double structure_curve = 1e-4;
    double warped = 1e-5;
};

/// Per-check pass/fail for a classification, using the curve tolerance when
/// the hypersurface is curve-integrated.
std::vector<CheckResult> verify_checks(const ClassificationReport& report, bool curve_based,
                                       const VerifyTolerances& tol = {});

/// Exit code for `verify`: 0 if every check passes, 2 if the verdict is
/// Indeterminate or points failed, else 1.
int verify_exit_code(const ClassificationReport& report, const std::vector<CheckResult>& checks);
/// Exit code for `classify`: 0 on a matched branch, 1 on NotSemiParallel, 2 on Indeterminate.
int classify_exit_code(const ClassificationReport& report);

/// Full command-line front end. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace moebiuslab
