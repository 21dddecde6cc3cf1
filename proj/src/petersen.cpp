#include "waring/petersen.hpp"

#include "waring/errors.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace waring {

void validate(const CaptureCounts& counts, bool require_capture) {
    if (counts.n10 < 0 || counts.n01 < 0 || counts.n11 < 0) {
        throw DomainError("capture counts must be non-negative");
    }
    if (require_capture && counts.ncap() < 1) {
        throw DomainError("at least one unit must be captured (n10 + n01 + n11 >= 1)");
    }
}

namespace petersen {
namespace {

double log_choose(std::int64_t n, std::int64_t k) {
    using boost::math::lgamma;
    return lgamma(static_cast<double>(n) + 1) - lgamma(static_cast<double>(k) + 1) -
           lgamma(static_cast<double>(n - k) + 1);
}

void validate_prior(PriorSpec prior) {
    if (!(prior.ell >= 0) || !std::isfinite(prior.ell)) {
        throw DomainError("prior parameter ell must be a finite value >= 0");
    }
}

}  // namespace

double hypergeom_log_pmf(std::int64_t n11, std::int64_t N, std::int64_t n1dot, std::int64_t ndot1) {
    if (N < 0 || n1dot < 0 || ndot1 < 0 || n1dot > N || ndot1 > N) {
        throw DomainError("hypergeometric margins must satisfy 0 <= n1., n.1 <= N");
    }
    const std::int64_t lo = std::max<std::int64_t>(0, n1dot + ndot1 - N);
    const std::int64_t hi = std::min(n1dot, ndot1);
    if (n11 < lo || n11 > hi) return -std::numeric_limits<double>::infinity();
    return log_choose(ndot1, n11) + log_choose(N - ndot1, n1dot - n11) - log_choose(N, n1dot);
}

double hypergeom_pmf(std::int64_t n11, std::int64_t N, std::int64_t n1dot, std::int64_t ndot1) {
    return std::exp(hypergeom_log_pmf(n11, N, n1dot, ndot1));
}

GwdParams prior(std::int64_t ncap, PriorSpec prior) {
    validate_prior(prior);
    if (ncap < 1) throw DomainError("prior: ncap must be >= 1");
    const double n = static_cast<double>(ncap);
    return {1.0, n + 1.0, n + 1.0 + prior.ell};
}

GwdParams posterior(const CaptureCounts& counts, PriorSpec prior) {
    validate(counts);
    validate_prior(prior);
    if (!(static_cast<double>(counts.n11) + prior.ell > 1.0)) {
        throw ImproperDistributionError(
            "posterior is improper: n11 + ell must exceed 1 (n11 = " + std::to_string(counts.n11) +
            "); use ell >= 2");
    }
    return {static_cast<double>(counts.n01) + 1.0, static_cast<double>(counts.n10) + 1.0,
            static_cast<double>(counts.ncap()) + prior.ell + 1.0};
}

PosteriorSummary posterior_summary(const CaptureCounts& counts, PriorSpec prior) {
    const GwdParams params = posterior(counts, prior);
    const std::int64_t modeK = gwd::mode(params);
    const GwdParams flat{params.a, params.b, static_cast<double>(counts.ncap()) + 1.0};
    return {
        .params = params,
        .meanK = gwd::mean(params),
        .varK = gwd::variance(params),
        .modeK = modeK,
        .pointN = counts.ncap() + modeK,
        .beta1 = flat.proper() ? gwd::skewness_beta1(flat) : Extended::undefined(),
    };
}

}  // namespace petersen
}  // namespace waring
