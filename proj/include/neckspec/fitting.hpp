#ifndef NECKSPEC_FITTING_HPP
#define NECKSPEC_FITTING_HPP

#include <string>
#include <vector>

namespace neckspec {

struct FitResult {
    double slope = 0.0;          // A
    double intercept = 0.0;      // B
    double r_squared = 0.0;
    bool degenerate = false;     // constant response; r2 reported as 0
    std::string model;           // e.g. "1/lambda affine in log(1/s)"
};

/// Ordinary least squares y = A x + B.
FitResult affine_fit(const std::vector<double>& x, const std::vector<double>& y);

} // namespace neckspec

#endif
