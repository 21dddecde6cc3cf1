#pragma once

#include "waring/petersen.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace waring {

enum class IntervalMethod {
    GwdCredible,      ///< posterior quantiles of K shifted by ncap
    Wald,             ///< Petersen estimate +- z sqrt(n01 n10 n.1 n1. / n11^3)
    ChapmanWald,      ///< Chapman estimate +- z sqrt(Seber-Wittes variance)
    LogNormal,        ///< normal approximation on the log scale
    Tlogit,           ///< 0.5-transformed logit
    GwdNormalApprox,  ///< normal approximation to the GWD quantiles
};

std::string_view to_string(IntervalMethod method);
/// Accepts the names produced by to_string; throws DomainError otherwise.
IntervalMethod parse_method(std::string_view name);

struct IntervalResult {
    IntervalMethod method = IntervalMethod::GwdCredible;
    double level = 0.95;
    double lb = 0.0;
    double ub = 0.0;
    double pointN = 0.0;
    std::optional<double> ell;  ///< set for the GWD-based methods
    bool below_ncap = false;    ///< lb < ncap (never for GwdCredible)

    double length() const { return ub - lb; }
};

namespace intervals {

/// Standard normal quantile.
double z_quantile(double p);

IntervalResult gwd_credible(const CaptureCounts& counts, PriorSpec prior, double level);

/// Normal approximation to the posterior q-quantile of K (not shifted by ncap).
/// Requires n11 + ell > 3.
double gwd_normal_approx_quantile(const CaptureCounts& counts, PriorSpec prior, double q);
IntervalResult gwd_normal_approx(const CaptureCounts& counts, PriorSpec prior, double level);

/// Throws DomainError when n11 = 0.  The lower bound is not clamped.
IntervalResult wald(const CaptureCounts& counts, double level);

/// Chapman estimator (n1.+1)(n.1+1)/(n11+1) - 1 with the Seber-Wittes variance
/// (n1.+1)(n.1+1)(n1.-n11)(n.1-n11) / ((n11+1)^2 (n11+2)).  Defined for n11 = 0.
IntervalResult chapman_wald(const CaptureCounts& counts, double level);

/// 1/n11 + 1/n10 + 1/n01 + n11/(n10 n01); every count must be positive.
double sigma_k2(const CaptureCounts& counts);

IntervalResult lognormal(const CaptureCounts& counts, double level);

/// Defined for every sample, including n11 = 0 and the empty sample.
IntervalResult tlogit(const CaptureCounts& counts, double level);

/// Dispatches on `method`; `prior` is ignored by the non-GWD methods.
IntervalResult compute(IntervalMethod method, const CaptureCounts& counts, PriorSpec prior,
                       double level);

}  // namespace intervals
}  // namespace waring
