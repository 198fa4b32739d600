#ifndef NECKSPEC_ERRORS_HPP
#define NECKSPEC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace neckspec {

// Input / configuration problems. CLI maps these to exit code 2.
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Argument outside the documented domain of an operation.
struct domain_error : std::runtime_error {
    explicit domain_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Mesh construction / topology failures.
struct mesh_error : std::runtime_error {
    explicit mesh_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Retraction-flow trajectory violated a guaranteed barrier.
struct flow_error : std::runtime_error {
    explicit flow_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical non-convergence. CLI maps these to exit code 3.
struct convergence_error : std::runtime_error {
    explicit convergence_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace neckspec

#endif
