#pragma once

// Two-source capture-recapture (Petersen) model with a Waring prior on the
// number of missed units K = N - ncap.  The posterior of K is
// GWD(n01 + 1, n10 + 1, ncap + ell + 1).

#include "waring/gwd.hpp"

#include <cstdint>

namespace waring {

struct CaptureCounts {
    std::int64_t n10 = 0;  ///< caught by source 1 only
    std::int64_t n01 = 0;  ///< caught by source 2 only
    std::int64_t n11 = 0;  ///< caught by both

    std::int64_t n1dot() const { return n10 + n11; }
    std::int64_t ndot1() const { return n01 + n11; }
    std::int64_t ncap() const { return n10 + n01 + n11; }

    /// The same sample with the two sources exchanged.
    CaptureCounts swapped() const { return {n01, n10, n11}; }

    friend bool operator==(const CaptureCounts&, const CaptureCounts&) = default;
};

/// Throws DomainError on negative counts or, when require_capture, ncap == 0.
void validate(const CaptureCounts& counts, bool require_capture = true);

/// Waring prior tail parameter ell >= 0 (ell = 2 is close to non-informative).
struct PriorSpec {
    double ell = 2.0;
};

struct PosteriorSummary {
    GwdParams params;        ///< posterior law of K
    Extended meanK;          ///< (n01+1)(n10+1)/(n11+ell-2) when n11+ell > 2
    Extended varK;           ///< finite when n11+ell > 3
    std::int64_t modeK = 0;  ///< floor(n10 n01 / (n11+ell)), ties resolved low
    std::int64_t pointN = 0; ///< ncap + modeK
    Extended beta1;          ///< skewness of the ell = 0 posterior
};

namespace petersen {

/// Pr(n11 | N, n1dot, ndot1); zero outside max(0, n1dot+ndot1-N) <= n11 <= min(n1dot, ndot1).
double hypergeom_log_pmf(std::int64_t n11, std::int64_t N, std::int64_t n1dot, std::int64_t ndot1);
double hypergeom_pmf(std::int64_t n11, std::int64_t N, std::int64_t n1dot, std::int64_t ndot1);

/// Waring prior on K given ncap: GWD(1, ncap+1, ncap+1+ell).  For ell <= 1 the
/// returned parameters are improper (params.proper() is false).
GwdParams prior(std::int64_t ncap, PriorSpec prior);

/// Posterior of K.  Throws ImproperDistributionError when n11 + ell <= 1.
GwdParams posterior(const CaptureCounts& counts, PriorSpec prior);

PosteriorSummary posterior_summary(const CaptureCounts& counts, PriorSpec prior);

}  // namespace petersen
}  // namespace waring
