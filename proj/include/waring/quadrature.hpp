#pragma once

#include <functional>
#include <span>

namespace waring::quad {

struct Result {
    double value = 0.0;
    double error = 0.0;  ///< estimated absolute error
    int subdivisions = 0;
};

/// Globally adaptive 21-point Gauss-Kronrod over consecutive segments
/// [breaks[0], breaks[1]], ..., bisecting the worst segment until the summed
/// error estimate is <= abs_tol.  Throws ConvergenceError when the segment
/// count would exceed max_subdivisions.
Result integrate(const std::function<double(double)>& f, std::span<const double> breaks,
                 double abs_tol, int max_subdivisions);

/// E[f(P)] for P ~ Beta(alpha, beta).  Endpoint singularities of the density
/// (alpha < 1 or beta < 1) are removed by a power substitution and the unit
/// interval is pre-split around the bulk of the density.
Result beta_expectation(const std::function<double(double)>& f, double alpha, double beta,
                        double abs_tol = 1e-10, int max_subdivisions = 2000);

}  // namespace waring::quad
