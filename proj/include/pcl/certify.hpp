#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pcl/painleve.hpp"

namespace pcl {

/// One certification item. `pass` already accounts for the direction of
/// the comparison (upper bounds for residuals, lower bounds for the
/// negative controls and refinement factors).
struct CheckResult {
    std::string name;  // "<criterion>/<subject>/<detail>"
    double value = 0.0;
    double threshold = 0.0;
    bool greater_is_pass = false;
    bool pass = false;
};

struct CertifyOptions {
    bool disable_shift_table = false; // negative-control debug switch
    double tol = 1e-12;               // trajectory tolerance for the suites
};

std::vector<CheckResult> certify_elliptic(const CertifyOptions& opt = {});
std::vector<CheckResult> certify_lax(const CertifyOptions& opt = {});
std::vector<CheckResult> certify_correspondence(const CertifyOptions& opt = {});
std::vector<CheckResult> certify_transport(const CertifyOptions& opt = {});
std::vector<CheckResult> certify_all(const CertifyOptions& opt = {});

bool all_pass(const std::vector<CheckResult>& checks);
std::string to_json(const std::vector<CheckResult>& checks);

/// Thread budget for grid sweeps: hardware concurrency capped by the
/// PCL_THREADS environment variable.
unsigned thread_budget();

/// Deterministic parallel map over [0, n): each index writes only its own
/// slot, so the output does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace pcl
