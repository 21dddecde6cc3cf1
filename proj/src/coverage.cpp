#include "waring/coverage.hpp"

#include "waring/errors.hpp"
#include "pmf_walker.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

namespace waring {

void validate(const DetectionProbs& probs) {
    if (!(probs.p1 > 0.0 && probs.p1 < 1.0) || !(probs.p2 > 0.0 && probs.p2 < 1.0)) {
        throw DomainError("detection probabilities must lie in (0, 1)");
    }
}

std::string MethodSpec::name() const {
    if (custom) return custom_name.empty() ? "custom" : custom_name;
    return std::string(to_string(method));
}

std::optional<double> MethodSpec::ell_tag() const {
    if (custom) return std::nullopt;
    if (method == IntervalMethod::GwdCredible || method == IntervalMethod::GwdNormalApprox) return ell;
    return std::nullopt;
}

std::optional<Bounds> MethodSpec::bounds(const CaptureCounts& counts) const {
    if (custom) return custom(counts);
    try {
        if (counts.ncap() == 0) {
            // No data: the posterior of K = N is the Yule prior GWD(1, 1, 1 + ell).
            if (method == IntervalMethod::GwdCredible) {
                const GwdParams yule{1.0, 1.0, 1.0 + ell};
                if (!yule.proper()) return std::nullopt;
                const double alpha = 1.0 - level;
                return Bounds{static_cast<double>(gwd::quantile(yule, alpha / 2)),
                              static_cast<double>(gwd::quantile(yule, 1.0 - alpha / 2))};
            }
            if (method != IntervalMethod::Tlogit && method != IntervalMethod::ChapmanWald) {
                return std::nullopt;
            }
        }
        const IntervalResult r = intervals::compute(method, counts, PriorSpec{ell}, level);
        return Bounds{r.lb, r.ub};
    } catch (const DomainError&) {
        return std::nullopt;
    }
}

MethodSpec parse_method_spec(const std::string& text, double level) {
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const IntervalMethod method = parse_method(head);
    MethodSpec spec = MethodSpec::of(method, level);
    const bool gwd_like = method == IntervalMethod::GwdCredible || method == IntervalMethod::GwdNormalApprox;
    if (colon != std::string::npos) {
        if (!gwd_like) throw DomainError("method '" + head + "' takes no ell");
        try {
            std::size_t used = 0;
            spec.ell = std::stod(text.substr(colon + 1), &used);
            if (used != text.size() - colon - 1) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw DomainError("bad ell in method '" + text + "'");
        }
        if (!(spec.ell >= 0)) throw DomainError("ell must be >= 0 in '" + text + "'");
    } else if (gwd_like) {
        spec.ell = 2.0;
    }
    return spec;
}

std::vector<double> GridSpec::points() const {
    if (!(step > 0) || !(start > 0) || !(stop < 1) || !(start <= stop)) {
        throw DomainError("grid must satisfy 0 < start <= stop < 1 with step > 0");
    }
    const auto n = static_cast<std::int64_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        out.push_back(std::round((start + static_cast<double>(i) * step) * 1e9) / 1e9);
    }
    return out;
}

namespace coverage {
namespace {

unsigned resolve_threads(unsigned threads) {
    if (threads != 0) return threads;
    return std::max(1u, std::thread::hardware_concurrency());
}

// Static partition of [0, n); every index writes only its own slot so the
// result does not depend on scheduling.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn fn) {
    threads = std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(std::max<std::size_t>(n, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([=, &fn] {
            for (std::size_t i = t; i < n; i += threads) fn(i);
        });
    }
}

class LogFactorials {
public:
    explicit LogFactorials(std::int64_t N) : table_(static_cast<std::size_t>(N) + 1) {
        for (std::int64_t i = 0; i <= N; ++i) {
            table_[static_cast<std::size_t>(i)] = boost::math::lgamma(static_cast<double>(i) + 1.0);
        }
    }
    double operator()(std::int64_t i) const { return table_[static_cast<std::size_t>(i)]; }

private:
    std::vector<double> table_;
};

struct CellTerms {
    double log_both, log_first, log_second, log_none;
    explicit CellTerms(DetectionProbs p)
        : log_both(std::log(p.p1) + std::log(p.p2)),
          log_first(std::log(p.p1) + std::log1p(-p.p2)),
          log_second(std::log1p(-p.p1) + std::log(p.p2)),
          log_none(std::log1p(-p.p1) + std::log1p(-p.p2)) {}
};

double log_prob(const SampleCell& cell, std::int64_t N, const CellTerms& t, const LogFactorials& lf) {
    const auto& c = cell.counts;
    return lf(N) - lf(c.n11) - lf(c.n10) - lf(c.n01) - lf(cell.K) +
           static_cast<double>(c.n11) * t.log_both + static_cast<double>(c.n10) * t.log_first +
           static_cast<double>(c.n01) * t.log_second + static_cast<double>(cell.K) * t.log_none;
}

// Shared accumulation so the table path and the direct path are bitwise equal.
template <typename BoundsAt>
CoverageCell accumulate(std::int64_t N, DetectionProbs probs, const MethodSpec& method,
                        const std::vector<SampleCell>& cells, BoundsAt bounds_at) {
    validate(probs);
    const CellTerms terms(probs);
    const LogFactorials lf(N);
    gwd::detail::NeumaierSum covered;
    gwd::detail::NeumaierSum rel_length;
    bool length_defined = true;
    const double n = static_cast<double>(N);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const double w = std::exp(log_prob(cells[i], N, terms, lf));
        const std::optional<Bounds> b = bounds_at(i);
        if (!b) {
            length_defined = false;
            continue;
        }
        if (b->lb <= n && n <= b->ub) covered.add(w);
        rel_length.add(w * (b->ub - b->lb) / n);
    }
    CoverageCell out;
    out.N = N;
    out.probs = probs;
    out.method = method.name();
    out.ell = method.ell_tag();
    out.level = method.level;
    out.coverage = std::clamp(covered.value(), 0.0, 1.0);
    out.expectedRelLength = length_defined ? Extended::finite(rel_length.value()) : Extended::undefined();
    return out;
}

}  // namespace

std::int64_t sample_count(std::int64_t N) {
    if (N < 0) return 0;
    return (N + 3) * (N + 2) * (N + 1) / 6;
}

void for_each_sample(std::int64_t N, const std::function<void(const SampleCell&)>& fn) {
    if (N < 1) throw DomainError("population size N must be >= 1");
    for (std::int64_t n11 = 0; n11 <= N; ++n11) {
        for (std::int64_t n10 = 0; n10 + n11 <= N; ++n10) {
            for (std::int64_t n01 = 0; n01 + n10 + n11 <= N; ++n01) {
                const CaptureCounts c{n10, n01, n11};
                fn(SampleCell{c, N - c.ncap()});
            }
        }
    }
}

std::vector<SampleCell> enumerate_samples(std::int64_t N) {
    std::vector<SampleCell> out;
    out.reserve(static_cast<std::size_t>(sample_count(N)));
    for_each_sample(N, [&](const SampleCell& c) { out.push_back(c); });
    return out;
}

double multinomial_log_prob(const SampleCell& cell, std::int64_t N, DetectionProbs probs) {
    validate(probs);
    if (cell.counts.ncap() + cell.K != N || cell.K < 0) {
        throw DomainError("sample cell inconsistent with N");
    }
    return log_prob(cell, N, CellTerms(probs), LogFactorials(N));
}

double multinomial_prob(const SampleCell& cell, std::int64_t N, DetectionProbs probs) {
    return std::exp(multinomial_log_prob(cell, N, probs));
}

IntervalTable::IntervalTable(std::int64_t N, std::vector<MethodSpec> methods, unsigned threads)
    : N_(N), cells_(enumerate_samples(N)), methods_(std::move(methods)) {
    bounds_.assign(methods_.size(), std::vector<std::optional<Bounds>>(cells_.size()));
    parallel_for(cells_.size(), threads, [this](std::size_t i) {
        for (std::size_t m = 0; m < methods_.size(); ++m) {
            bounds_[m][i] = methods_[m].bounds(cells_[i].counts);
        }
    });
}

CoverageCell IntervalTable::coverage(std::size_t method, DetectionProbs probs) const {
    const auto& column = bounds_.at(method);
    return accumulate(N_, probs, methods_[method], cells_,
                      [&](std::size_t i) -> const std::optional<Bounds>& { return column[i]; });
}

CoverageCell exact_coverage(std::int64_t N, DetectionProbs probs, const MethodSpec& method) {
    const std::vector<SampleCell> cells = enumerate_samples(N);
    return accumulate(N, probs, method, cells,
                      [&](std::size_t i) { return method.bounds(cells[i].counts); });
}

std::vector<CoverageCell> coverage_grid(const IntervalTable& table, const GridSpec& grid,
                                        unsigned threads) {
    const std::vector<double> pts = grid.points();
    const std::size_t nm = table.methods().size();
    std::vector<CoverageCell> out(pts.size() * pts.size() * nm);
    parallel_for(pts.size() * pts.size(), threads, [&](std::size_t idx) {
        const DetectionProbs probs{pts[idx / pts.size()], pts[idx % pts.size()]};
        for (std::size_t m = 0; m < nm; ++m) out[idx * nm + m] = table.coverage(m, probs);
    });
    return out;
}

std::vector<CoverageCell> coverage_grid(std::int64_t N, const GridSpec& grid,
                                        const std::vector<MethodSpec>& methods, unsigned threads) {
    grid.points();  // validate before the expensive part
    const IntervalTable table(N, methods, threads);
    return coverage_grid(table, grid, threads);
}

BoxSummary summarize(std::vector<double> values) {
    BoxSummary s;
    s.count = values.size();
    if (values.empty()) return s;
    std::sort(values.begin(), values.end());
    // Linear interpolation between order statistics (R's default type 7).
    auto at = [&](double prob) {
        const double h = (static_cast<double>(values.size()) - 1) * prob;
        const auto lo = static_cast<std::size_t>(std::floor(h));
        const std::size_t hi = std::min(lo + 1, values.size() - 1);
        return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
    };
    s.min = values.front();
    s.q1 = at(0.25);
    s.median = at(0.5);
    s.q3 = at(0.75);
    s.max = values.back();
    gwd::detail::NeumaierSum sum;
    for (double v : values) sum.add(v);
    s.mean = sum.value() / static_cast<double>(values.size());
    return s;
}

LengthReport length_study(std::int64_t N, const LengthOptions& options, const MethodSpec& first,
                          const MethodSpec& second) {
    if (N < 1) throw DomainError("population size N must be >= 1");
    LengthReport report;
    report.N = N;
    report.options = options;
    report.first_method = first.name();
    report.second_method = second.name();

    std::vector<SampleCell> cells;
    for_each_sample(N, [&](const SampleCell& c) {
        if (c.counts.n11 >= options.min_n11) cells.push_back(c);
    });
    report.pre_filter_count = cells.size();

    struct Pair {
        std::optional<Bounds> a, b;
    };
    std::vector<Pair> bounds(cells.size());
    parallel_for(cells.size(), 0, [&](std::size_t i) {
        bounds[i] = {first.bounds(cells[i].counts), second.bounds(cells[i].counts)};
    });

    const double n = static_cast<double>(N);
    auto length = [&](const Bounds& b) {
        if (!options.round_endpoints) return b.ub - b.lb;
        return std::round(b.ub) - std::round(b.lb);
    };
    std::vector<double> rel_a, rel_b;
    std::size_t longer = 0, longer_raw = 0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto& [a, b] = bounds[i];
        if (!a || !b) continue;
        const double la = length(*a);
        const double lb = length(*b);
        const bool drop = options.cap_relative ? (la / n > options.cap || lb / n > options.cap)
                                               : (la > options.cap || lb > options.cap);
        if (drop) continue;
        const bool second_longer = lb > la;
        longer += second_longer ? 1 : 0;
        longer_raw += (b->ub - b->lb) > (a->ub - a->lb) ? 1 : 0;
        report.rows.push_back({cells[i].counts, la / n, lb / n, second_longer});
        rel_a.push_back(la / n);
        rel_b.push_back(lb / n);
    }
    report.retained_count = report.rows.size();
    if (report.retained_count > 0) {
        const auto total = static_cast<double>(report.retained_count);
        report.second_longer_fraction = static_cast<double>(longer) / total;
        report.second_longer_fraction_unrounded = static_cast<double>(longer_raw) / total;
    }
    report.first = summarize(std::move(rel_a));
    report.second = summarize(std::move(rel_b));
    return report;
}

LengthReport length_study(std::int64_t N, const LengthOptions& options) {
    return length_study(N, options, MethodSpec::gwd(2.0, options.level),
                        MethodSpec::of(IntervalMethod::Tlogit, options.level));
}

}  // namespace coverage
}  // namespace waring
