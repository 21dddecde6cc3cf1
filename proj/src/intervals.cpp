#include "waring/intervals.hpp"

#include "waring/errors.hpp"

#include <boost/math/distributions/normal.hpp>

#include <array>
#include <cmath>
#include <string>
#include <utility>

namespace waring {

namespace {

constexpr std::array<std::pair<IntervalMethod, std::string_view>, 6> kNames{{
    {IntervalMethod::GwdCredible, "gwd"},
    {IntervalMethod::Wald, "wald"},
    {IntervalMethod::ChapmanWald, "chapman_wald"},
    {IntervalMethod::LogNormal, "lognormal"},
    {IntervalMethod::Tlogit, "tlogit"},
    {IntervalMethod::GwdNormalApprox, "gwd_normal"},
}};

void check_level(double level) {
    if (!(level > 0.0 && level < 1.0)) throw DomainError("level must lie in (0, 1)");
}

}  // namespace

std::string_view to_string(IntervalMethod method) {
    for (const auto& [m, name] : kNames) {
        if (m == method) return name;
    }
    return "unknown";
}

IntervalMethod parse_method(std::string_view name) {
    for (const auto& [m, n] : kNames) {
        if (n == name) return m;
    }
    throw DomainError("unknown interval method '" + std::string(name) + "'");
}

namespace intervals {

double z_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("z_quantile: p must lie in (0, 1)");
    return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

IntervalResult gwd_credible(const CaptureCounts& counts, PriorSpec prior, double level) {
    check_level(level);
    const PosteriorSummary post = petersen::posterior_summary(counts, prior);
    const double alpha = 1.0 - level;
    const double ncap = static_cast<double>(counts.ncap());
    IntervalResult r;
    r.method = IntervalMethod::GwdCredible;
    r.level = level;
    r.ell = prior.ell;
    r.lb = ncap + static_cast<double>(gwd::quantile(post.params, alpha / 2));
    r.ub = ncap + static_cast<double>(gwd::quantile(post.params, 1.0 - alpha / 2));
    r.pointN = static_cast<double>(post.pointN);
    return r;
}

double gwd_normal_approx_quantile(const CaptureCounts& counts, PriorSpec prior, double q) {
    validate(counts);
    const double s = static_cast<double>(counts.n11) + prior.ell;
    if (!(s > 3.0)) throw DomainError("normal approximation requires n11 + ell > 3");
    const double a = static_cast<double>(counts.n01) + 1.0;
    const double b = static_cast<double>(counts.n10) + 1.0;
    const double centre = a * b / s;
    const double var = a * b * (static_cast<double>(counts.ndot1()) - 1.0 + prior.ell) *
                       (static_cast<double>(counts.n1dot()) - 1.0 + prior.ell) /
                       ((s - 2.0) * (s - 2.0) * (s - 3.0));
    return centre + z_quantile(q) * std::sqrt(var);
}

IntervalResult gwd_normal_approx(const CaptureCounts& counts, PriorSpec prior, double level) {
    check_level(level);
    const double alpha = 1.0 - level;
    const double ncap = static_cast<double>(counts.ncap());
    IntervalResult r;
    r.method = IntervalMethod::GwdNormalApprox;
    r.level = level;
    r.ell = prior.ell;
    r.lb = ncap + gwd_normal_approx_quantile(counts, prior, alpha / 2);
    r.ub = ncap + gwd_normal_approx_quantile(counts, prior, 1.0 - alpha / 2);
    r.pointN = ncap + gwd_normal_approx_quantile(counts, prior, 0.5);
    r.below_ncap = r.lb < ncap;
    return r;
}

IntervalResult wald(const CaptureCounts& counts, double level) {
    check_level(level);
    validate(counts);
    if (counts.n11 == 0) throw DomainError("Wald interval is undefined when n11 = 0 (division by zero)");
    const double n10 = static_cast<double>(counts.n10);
    const double n01 = static_cast<double>(counts.n01);
    const double n11 = static_cast<double>(counts.n11);
    const double ncap = static_cast<double>(counts.ncap());
    const double centre = ncap + n01 * n10 / n11;
    const double sd = std::sqrt(n01 * n10 * static_cast<double>(counts.ndot1()) *
                                static_cast<double>(counts.n1dot()) / (n11 * n11 * n11));
    const double z = z_quantile(1.0 - (1.0 - level) / 2);
    IntervalResult r;
    r.method = IntervalMethod::Wald;
    r.level = level;
    r.lb = centre - z * sd;
    r.ub = centre + z * sd;
    r.pointN = centre;
    r.below_ncap = r.lb < ncap;
    return r;
}

IntervalResult chapman_wald(const CaptureCounts& counts, double level) {
    check_level(level);
    validate(counts, false);
    const double n1 = static_cast<double>(counts.n1dot());
    const double n2 = static_cast<double>(counts.ndot1());
    const double m = static_cast<double>(counts.n11);
    const double centre = (n1 + 1) * (n2 + 1) / (m + 1) - 1;
    const double var = (n1 + 1) * (n2 + 1) * (n1 - m) * (n2 - m) / ((m + 1) * (m + 1) * (m + 2));
    const double z = z_quantile(1.0 - (1.0 - level) / 2);
    IntervalResult r;
    r.method = IntervalMethod::ChapmanWald;
    r.level = level;
    r.lb = centre - z * std::sqrt(var);
    r.ub = centre + z * std::sqrt(var);
    r.pointN = centre;
    r.below_ncap = r.lb < static_cast<double>(counts.ncap());
    return r;
}

double sigma_k2(const CaptureCounts& counts) {
    validate(counts);
    if (counts.n10 < 1 || counts.n01 < 1 || counts.n11 < 1) {
        throw DomainError("sigma_K^2 requires n10, n01 and n11 all >= 1");
    }
    const double n10 = static_cast<double>(counts.n10);
    const double n01 = static_cast<double>(counts.n01);
    const double n11 = static_cast<double>(counts.n11);
    return 1.0 / n11 + 1.0 / n10 + 1.0 / n01 + n11 / (n10 * n01);
}

IntervalResult lognormal(const CaptureCounts& counts, double level) {
    check_level(level);
    const double sigma = std::sqrt(sigma_k2(counts));
    const double ncap = static_cast<double>(counts.ncap());
    const double k_hat = static_cast<double>(counts.n01) * static_cast<double>(counts.n10) /
                         static_cast<double>(counts.n11);
    const double z = z_quantile(1.0 - (1.0 - level) / 2);
    IntervalResult r;
    r.method = IntervalMethod::LogNormal;
    r.level = level;
    r.lb = ncap + k_hat * std::exp(-z * sigma);
    r.ub = ncap + k_hat * std::exp(z * sigma);
    r.pointN = ncap + k_hat;
    return r;
}

IntervalResult tlogit(const CaptureCounts& counts, double level) {
    check_level(level);
    validate(counts, false);
    const double x10 = static_cast<double>(counts.n10) + 0.5;
    const double x01 = static_cast<double>(counts.n01) + 0.5;
    const double x11 = static_cast<double>(counts.n11) + 0.5;
    const double sigma = std::sqrt(1.0 / x11 + 1.0 / x10 + 1.0 / x01 + x11 / (x10 * x01));
    const double ncap = static_cast<double>(counts.ncap());
    const double k_hat = x01 * x10 / x11;
    const double z = z_quantile(1.0 - (1.0 - level) / 2);
    IntervalResult r;
    r.method = IntervalMethod::Tlogit;
    r.level = level;
    r.lb = ncap + k_hat * std::exp(-z * sigma) - 0.5;
    r.ub = ncap + k_hat * std::exp(z * sigma) - 0.5;
    r.pointN = ncap + k_hat - 0.5;
    r.below_ncap = r.lb < ncap;
    return r;
}

IntervalResult compute(IntervalMethod method, const CaptureCounts& counts, PriorSpec prior,
                       double level) {
    switch (method) {
        case IntervalMethod::GwdCredible: return gwd_credible(counts, prior, level);
        case IntervalMethod::Wald: return wald(counts, level);
        case IntervalMethod::ChapmanWald: return chapman_wald(counts, level);
        case IntervalMethod::LogNormal: return lognormal(counts, level);
        case IntervalMethod::Tlogit: return tlogit(counts, level);
        case IntervalMethod::GwdNormalApprox: return gwd_normal_approx(counts, prior, level);
    }
    throw DomainError("unknown interval method");
}

}  // namespace intervals
}  // namespace waring
