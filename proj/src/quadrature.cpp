#include "waring/quadrature.hpp"

#include "waring/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

namespace waring::quad {
namespace {

constexpr unsigned kPoints = 21;
using Kronrod = boost::math::quadrature::gauss_kronrod<double, kPoints>;
using Gauss = boost::math::quadrature::gauss<double, (kPoints - 1) / 2>;

struct Segment {
    double lo;
    double hi;
    double value;
    double error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

// Gauss order 10 is even: the centre node is Kronrod-only and Gauss nodes sit
// at the odd abscissa indices.
Segment rule(const std::function<double(double)>& f, double lo, double hi) {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    const auto& x = Kronrod::abscissa();
    const auto& wk = Kronrod::weights();
    const auto& wg = Gauss::weights();

    double kronrod = f(mid) * wk[0];
    double gauss = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double fsum = f(mid + half * x[i]) + f(mid - half * x[i]);
        kronrod += fsum * wk[i];
        if (i % 2 == 1) gauss += fsum * wg[i / 2];
    }
    kronrod *= half;
    gauss *= half;
    const double err = std::max(std::abs(kronrod - gauss),
                                std::abs(kronrod) * 2 * std::numeric_limits<double>::epsilon());
    return {lo, hi, kronrod, err};
}

}  // namespace

Result integrate(const std::function<double(double)>& f, std::span<const double> breaks,
                 double abs_tol, int max_subdivisions) {
    std::priority_queue<Segment> heap;
    double total = 0.0;
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (!(breaks[i + 1] > breaks[i])) continue;
        Segment s = rule(f, breaks[i], breaks[i + 1]);
        total += s.value;
        total_err += s.error;
        heap.push(s);
    }
    int count = static_cast<int>(heap.size());
    while (total_err > abs_tol) {
        if (count >= max_subdivisions) {
            throw ConvergenceError("quadrature: error estimate " + std::to_string(total_err) +
                                   " above tolerance after " + std::to_string(count) +
                                   " subdivisions");
        }
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        Segment left = rule(f, worst.lo, mid);
        Segment right = rule(f, mid, worst.hi);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++count;
        // Re-sum occasionally so cancellation in the running totals cannot stall.
        if (count % 64 == 0) {
            auto copy = heap;
            total = 0.0;
            total_err = 0.0;
            while (!copy.empty()) {
                total += copy.top().value;
                total_err += copy.top().error;
                copy.pop();
            }
        }
    }
    return {total, total_err, count};
}

Result beta_expectation(const std::function<double(double)>& f, double alpha, double beta,
                        double abs_tol, int max_subdivisions) {
    if (!(alpha > 0) || !(beta > 0)) {
        throw DomainError("beta_expectation: shapes must be positive");
    }
    const double log_b = boost::math::lgamma(alpha) + boost::math::lgamma(beta) -
                         boost::math::lgamma(alpha + beta);
    const double mean = alpha / (alpha + beta);
    const double sd = std::sqrt(alpha * beta / ((alpha + beta) * (alpha + beta) * (alpha + beta + 1)));

    std::vector<double> cuts;
    for (double k : {-10.0, -4.0, -1.0, 0.0, 1.0, 4.0, 10.0}) {
        const double p = mean + k * sd;
        if (p > 1e-300 && p < 1.0) cuts.push_back(p);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    if (cuts.empty()) cuts.push_back(0.5);

    // Three pieces: (0, first] with p = first * t^(1/alpha) when alpha < 1,
    // the interior cuts as is, and [last, 1) with 1-p = (1-last) * s^(1/beta)
    // when beta < 1.
    const double first = cuts.front();
    const double last = cuts.back();

    auto density = [&](double p) {
        return std::exp((alpha - 1) * std::log(p) + (beta - 1) * std::log1p(-p) - log_b);
    };

    Result result{};

    // Left end.
    {
        std::function<double(double)> g;
        if (alpha < 1) {
            const double scale = std::exp(alpha * std::log(first) - std::log(alpha) - log_b);
            g = [&, scale](double t) {
                const double p = first * std::pow(t, 1.0 / alpha);
                if (p <= 0) return 0.0;
                return f(p) * std::exp((beta - 1) * std::log1p(-p)) * scale;
            };
        } else {
            g = [&](double p) { return p <= 0 ? 0.0 : f(p) * density(p); };
        }
        const double hi = alpha < 1 ? 1.0 : first;
        const double breaks[] = {0.0, hi};
        Result r = integrate(g, breaks, abs_tol / 3, max_subdivisions);
        result.value += r.value;
        result.error += r.error;
        result.subdivisions += r.subdivisions;
    }
    // Bulk.
    if (cuts.size() > 1) {
        std::function<double(double)> g = [&](double p) { return f(p) * density(p); };
        Result r = integrate(g, cuts, abs_tol / 3, max_subdivisions - result.subdivisions);
        result.value += r.value;
        result.error += r.error;
        result.subdivisions += r.subdivisions;
    }
    // Right end.
    {
        std::function<double(double)> g;
        if (beta < 1) {
            const double scale = std::exp(beta * std::log1p(-last) - std::log(beta) - log_b);
            g = [&, scale](double s) {
                const double q = (1 - last) * std::pow(s, 1.0 / beta);
                const double p = 1 - q;
                if (q <= 0 || p <= 0) return 0.0;
                return f(p) * std::exp((alpha - 1) * std::log(p)) * scale;
            };
        } else {
            g = [&](double p) { return p >= 1 ? 0.0 : f(p) * density(p); };
        }
        const double lo = beta < 1 ? 0.0 : last;
        const double hi = 1.0;
        const double breaks[] = {lo, hi};
        Result r = integrate(g, breaks, abs_tol / 3, max_subdivisions - result.subdivisions);
        result.value += r.value;
        result.error += r.error;
        result.subdivisions += r.subdivisions;
    }
    return result;
}

}  // namespace waring::quad
