#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace polymer {

struct QuadratureOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    std::size_t max_intervals = 400;
};

struct QuadResult {
    double value = 0.0;
    double abs_error = 0.0;  // estimated residual
};

struct QuadratureError : std::runtime_error {
    QuadratureError(const std::string& what, double value_, double residual_)
        : std::runtime_error(what), value(value_), residual(residual_) {}
    double value;
    double residual;
};

// Adaptive Gauss-Kronrod integration of f on [a, b]. Interior breakpoints
// mark integrable singularities (|p|^alpha endpoints included) or boundary
// layers that the subdivision must respect; endpoint singularities are
// handled by the extrapolating scheme. Throws QuadratureError, carrying the
// best value and residual, when the requested tolerance is unreachable.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     std::vector<double> breakpoints = {},
                     const QuadratureOptions& opt = {});

}  // namespace polymer
