#include "waring/gwd.hpp"

#include "waring/errors.hpp"
#include "waring/quadrature.hpp"
#include "pmf_walker.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace waring {

double Extended::value() const {
    if (!is_finite()) throw DomainError("value requested from a non-finite moment");
    return value_;
}

std::string Extended::to_string(int decimals) const {
    switch (kind_) {
        case Kind::Undefined: return "NA";
        case Kind::Infinite: return "inf";
        case Kind::Finite: break;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value_);
    return buf;
}

void validate(const GwdParams& params) {
    if (!(params.a > 0) || !(params.b > 0) || !(params.c > 0) || !std::isfinite(params.a) ||
        !std::isfinite(params.b) || !std::isfinite(params.c)) {
        throw DomainError("GWD parameters must be positive and finite");
    }
    if (!(params.c > params.a + params.b)) {
        throw ImproperDistributionError("GWD(a,b,c) requires c > a + b (got c - a - b = " +
                                        std::to_string(params.c - params.a - params.b) + ")");
    }
}

namespace gwd {

namespace {

// Above this k the direct sum is replaced by quadrature in the default CDF.
constexpr std::int64_t kSummationCutoff = 4096;
// Bisection stops once the bracket is this narrow; a pmf scan finishes it.
constexpr std::int64_t kScanWidth = 256;

double lgam(double x) { return boost::math::lgamma(x); }

}  // namespace

double log_pochhammer(double x, std::int64_t k) {
    if (!(x > 0)) throw DomainError("log_pochhammer: x must be positive");
    if (k < 0) throw DomainError("log_pochhammer: k must be non-negative");
    if (k == 0) return 0.0;
    if (k <= 16) {
        double s = 0.0;
        for (std::int64_t j = 0; j < k; ++j) s += std::log(x + static_cast<double>(j));
        return s;
    }
    const double kd = static_cast<double>(k);
    // Gamma(x)/Gamma(x+k) is evaluated without cancellation while it stays representable.
    if (kd * std::log(x + kd) < 600.0) {
        return -std::log(boost::math::tgamma_delta_ratio(x, kd));
    }
    return lgam(x + kd) - lgam(x);
}

double log_norm_const(const GwdParams& params) {
    validate(params);
    const auto [a, b, c] = params;
    return lgam(c - a - b) + lgam(c) - lgam(c - b) - lgam(c - a);
}

double norm_const(const GwdParams& params) { return std::exp(log_norm_const(params)); }

double log_pmf(const GwdParams& params, std::int64_t k) {
    validate(params);
    if (k < 0) return -std::numeric_limits<double>::infinity();
    const auto [a, b, c] = params;
    return log_pochhammer(a, k) + log_pochhammer(b, k) - log_pochhammer(c, k) -
           lgam(static_cast<double>(k) + 1.0) - log_norm_const(params);
}

double pmf(const GwdParams& params, std::int64_t k) { return std::exp(log_pmf(params, k)); }

double cdf_summation(const GwdParams& params, std::int64_t k) {
    validate(params);
    if (k < 0) return 0.0;
    detail::PmfWalker walk(params, 0);
    detail::NeumaierSum sum;
    for (;;) {
        sum.add(walk.pmf());
        if (walk.k() >= k) break;
        walk.step();
    }
    return std::min(1.0, sum.value());
}

double cdf_quadrature(const GwdParams& params, std::int64_t k) {
    validate(params);
    if (k < 0) return 0.0;
    const double a = params.a;
    const double shape = static_cast<double>(k) + 1.0;
    // NB(a, p) CDF at k is I_p(a, k+1).
    auto nb_cdf = [a, shape](double p) { return boost::math::ibeta(a, shape, p); };
    const quad::Result r = quad::beta_expectation(nb_cdf, params.tail_index(), params.b, 1e-10, 2000);
    return std::clamp(r.value, 0.0, 1.0);
}

double survival(const GwdParams& params, std::int64_t k) {
    validate(params);
    if (k <= 0) return 1.0;
    if (params.a == 1.0) {
        return std::exp(log_pochhammer(params.b, k) - log_pochhammer(params.c - 1.0, k));
    }
    return 1.0 - cdf(params, k - 1);
}

double cdf(const GwdParams& params, std::int64_t k, CdfMethod method) {
    validate(params);
    if (k < 0) return 0.0;
    if (method == CdfMethod::Summation) return cdf_summation(params, k);
    if (params.a == 1.0) return 1.0 - survival(params, k + 1);
    if (k <= kSummationCutoff) return cdf_summation(params, k);
    return cdf_quadrature(params, k);
}

double tail_bound(const GwdParams& params, std::int64_t m) {
    validate(params);
    if (m < 0) return 1.0;
    const auto [a, b, c] = params;
    const double d = c - a - b;
    const double e = c - 1.0 - a * b;
    const double g_min = d + std::min(0.0, e - d) / (static_cast<double>(m) + 2.0);
    if (!(g_min > 0)) return std::numeric_limits<double>::infinity();
    return pmf(params, m + 1) * (static_cast<double>(m) + c) / g_min;
}

std::int64_t truncation_point(const GwdParams& params, double eps) {
    validate(params);
    if (!(eps > 0)) throw DomainError("truncation_point: eps must be positive");
    std::int64_t lo = mode(params);
    if (tail_bound(params, lo) <= eps) return lo;
    std::int64_t hi = std::max<std::int64_t>(2 * lo, 16);
    while (tail_bound(params, hi) > eps) {
        lo = hi;
        hi *= 2;
        if (hi > (std::int64_t{1} << 50)) {
            throw ConvergenceError("truncation_point: tail too heavy for eps");
        }
    }
    while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        (tail_bound(params, mid) <= eps ? hi : lo) = mid;
    }
    return hi;
}

std::int64_t quantile(const GwdParams& params, double q, QuantileRule rule) {
    validate(params);
    if (!(q > 0.0 && q < 1.0)) throw DomainError("quantile: q must lie in (0, 1)");

    auto satisfied = [q, rule](double F) {
        return rule == QuantileRule::AtLeast ? F >= q - kQuantileTieTolerance
                                             : F > q + kQuantileTieTolerance;
    };
    // Scans upward from `start` given cdf(start - 1) = base; stops at `limit`.
    auto scan = [&](std::int64_t start, double base, std::int64_t limit) -> std::int64_t {
        detail::PmfWalker walk(params, start);
        detail::NeumaierSum sum;
        sum.add(base);
        for (;;) {
            sum.add(walk.pmf());
            if (satisfied(sum.value()) || walk.k() >= limit) return walk.k();
            walk.step();
        }
    };

    const std::int64_t m0 = mode(params);
    std::int64_t lo = -1;  // cdf(lo) < q is known
    std::int64_t hi;
    if (m0 <= kSummationCutoff) {
        // Small supports: one pass from 0 is cheaper than any bracketing.
        detail::PmfWalker walk(params, 0);
        detail::NeumaierSum sum;
        for (;;) {
            sum.add(walk.pmf());
            if (satisfied(sum.value())) return walk.k();
            if (walk.k() >= kSummationCutoff) break;
            walk.step();
        }
        lo = kSummationCutoff;
        hi = 2 * kSummationCutoff;
    } else if (satisfied(cdf(params, m0))) {
        hi = m0;
    } else {
        lo = m0;
        hi = 2 * m0;
    }
    while (!satisfied(cdf(params, hi))) {
        lo = hi;
        hi *= 2;
        if (hi > (std::int64_t{1} << 52)) throw ConvergenceError("quantile: bracket overflow");
    }
    while (hi - lo > kScanWidth) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        (satisfied(cdf(params, mid)) ? hi : lo) = mid;
    }
    const double base = lo >= 0 ? cdf(params, lo) : 0.0;
    return scan(lo + 1, base, hi);
}

Extended mean(const GwdParams& params) {
    validate(params);
    const auto [a, b, c] = params;
    const double d = c - a - b;
    if (!(d > 1)) return Extended::infinite();
    return Extended::finite(a * b / (d - 1));
}

Extended variance(const GwdParams& params) {
    validate(params);
    const auto [a, b, c] = params;
    const double d = c - a - b;
    if (!(d > 2)) return Extended::infinite();
    return Extended::finite(a * b * (c - a - 1) * (c - b - 1) / ((d - 2) * (d - 1) * (d - 1)));
}

Extended skewness_beta1(const GwdParams& params) {
    validate(params);
    const auto [a, b, c] = params;
    const double d = c - a - b;
    if (!(d > 3)) return Extended::undefined();
    const double num = (c + a - b - 1) * (c + a - b - 1) * (c - a + b - 1) * (c - a + b - 1) * (d - 2);
    const double den = a * b * (c - a - 1) * (c - b - 1) * (d - 3) * (d - 3);
    return Extended::finite(num / den);
}

std::int64_t mode(const GwdParams& params) {
    validate(params);
    const auto [a, b, c] = params;
    const double x = (a - 1) * (b - 1) / (c - a - b + 1);
    if (!(x >= 1)) return 0;
    const auto m = static_cast<std::int64_t>(std::floor(x));
    // pmf(m) / pmf(m-1) = (a+m-1)(b+m-1) / ((c+m-1) m); equality is the tie.
    const double md = static_cast<double>(m);
    const double up = (a + md - 1) * (b + md - 1);
    const double down = (c + md - 1) * md;
    if (std::abs(up - down) <= 4 * std::numeric_limits<double>::epsilon() * down) return m - 1;
    return m;
}

GwdParams shift_conditional(const GwdParams& params, std::int64_t m) {
    validate(params);
    if (params.a != 1.0) throw DomainError("shift_conditional: requires a simple Waring law (a = 1)");
    if (m < 0) throw DomainError("shift_conditional: m must be non-negative");
    const double md = static_cast<double>(m);
    return {1.0, params.b + md, params.c + md};
}

double nb_log_pmf(const NegBinParams& nb, std::int64_t k) {
    if (!(nb.a > 0) || !(nb.p > 0 && nb.p < 1)) {
        throw DomainError("negative binomial requires a > 0 and 0 < p < 1");
    }
    if (k < 0) return -std::numeric_limits<double>::infinity();
    const double kd = static_cast<double>(k);
    return log_pochhammer(nb.a, k) - lgam(kd + 1) + nb.a * std::log(nb.p) + kd * std::log1p(-nb.p);
}

double nb_pmf(const NegBinParams& nb, std::int64_t k) { return std::exp(nb_log_pmf(nb, k)); }

std::int64_t sample(const GwdParams& params, std::mt19937_64& rng) {
    validate(params);
    std::gamma_distribution<double> ga(params.tail_index(), 1.0);
    std::gamma_distribution<double> gb(params.b, 1.0);
    double p = 0.0;
    do {
        const double x = ga(rng);
        const double y = gb(rng);
        p = x / (x + y);
    } while (!(p > 0.0 && p < 1.0));
    // NB(a, p) as a Poisson with Gamma(a, (1-p)/p) rate.
    const double rate = std::gamma_distribution<double>(params.a, (1 - p) / p)(rng);
    constexpr double kMaxRate = 4e18;
    if (!(rate < kMaxRate)) return std::numeric_limits<std::int64_t>::max();
    return std::poisson_distribution<std::int64_t>(rate)(rng);
}

}  // namespace gwd
}  // namespace waring
