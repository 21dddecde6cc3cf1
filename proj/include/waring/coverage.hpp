#pragma once

// Exact frequentist evaluation of interval methods for a known population
// size N.  Every possible sample (n10, n01, n11) with n10 + n01 + n11 <= N is
// enumerated; the interval of each method is computed once per sample and the
// coverage for a detection-probability pair (p1, p2) is the multinomial
// expectation of the coverage indicator.

#include "waring/gwd.hpp"
#include "waring/intervals.hpp"
#include "waring/petersen.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace waring {

struct DetectionProbs {
    double p1;
    double p2;
};

void validate(const DetectionProbs& probs);

struct SampleCell {
    CaptureCounts counts;
    std::int64_t K = 0;  ///< N - ncap
};

struct Bounds {
    double lb;
    double ub;
};

/// A method under study: one of the library intervals, or an arbitrary
/// function of the counts (returning nullopt where the method is undefined).
struct MethodSpec {
    IntervalMethod method = IntervalMethod::GwdCredible;
    double ell = 2.0;
    double level = 0.95;
    std::function<std::optional<Bounds>(const CaptureCounts&)> custom;
    std::string custom_name;

    static MethodSpec gwd(double ell, double level = 0.95) {
        return {IntervalMethod::GwdCredible, ell, level, {}, {}};
    }
    static MethodSpec of(IntervalMethod m, double level = 0.95) { return {m, 0.0, level, {}, {}}; }

    /// "gwd", "tlogit", ... or the custom name.
    std::string name() const;
    /// ell for the GWD methods, nullopt otherwise.
    std::optional<double> ell_tag() const;

    /// Bounds for one sample; nullopt where the method is undefined.  The
    /// empty sample uses the prior GWD(1, 1, 1 + ell) for the GWD methods.
    std::optional<Bounds> bounds(const CaptureCounts& counts) const;
};

/// Parses "gwd:2", "gwd:3", "tlogit", "wald", "lognormal", "chapman_wald",
/// "gwd_normal:3" at the given level.
MethodSpec parse_method_spec(const std::string& text, double level);

struct CoverageCell {
    std::int64_t N = 0;
    DetectionProbs probs{};
    std::string method;
    std::optional<double> ell;
    double level = 0.95;
    double coverage = 0.0;
    Extended expectedRelLength = Extended::undefined();
};

struct GridSpec {
    double start = 0.10;
    double stop = 0.90;
    double step = 0.05;

    /// Inclusive, rounded to 1e-9 so that 0.1 + 16 * 0.05 lands on 0.9.
    std::vector<double> points() const;
};

namespace coverage {

std::int64_t sample_count(std::int64_t N);

/// Calls fn for every sample in a fixed order (n11, then n10, then n01).
void for_each_sample(std::int64_t N, const std::function<void(const SampleCell&)>& fn);
std::vector<SampleCell> enumerate_samples(std::int64_t N);

double multinomial_log_prob(const SampleCell& cell, std::int64_t N, DetectionProbs probs);
double multinomial_prob(const SampleCell& cell, std::int64_t N, DetectionProbs probs);

/// Intervals of several methods over all samples of one N, computed once.
class IntervalTable {
public:
    IntervalTable(std::int64_t N, std::vector<MethodSpec> methods, unsigned threads = 0);

    std::int64_t N() const { return N_; }
    const std::vector<SampleCell>& cells() const { return cells_; }
    const std::vector<MethodSpec>& methods() const { return methods_; }
    const std::optional<Bounds>& bounds(std::size_t method, std::size_t cell) const {
        return bounds_[method][cell];
    }

    CoverageCell coverage(std::size_t method, DetectionProbs probs) const;

private:
    std::int64_t N_;
    std::vector<SampleCell> cells_;
    std::vector<MethodSpec> methods_;
    std::vector<std::vector<std::optional<Bounds>>> bounds_;
};

/// Coverage computed directly, evaluating the method inside the sum.
CoverageCell exact_coverage(std::int64_t N, DetectionProbs probs, const MethodSpec& method);

/// Row-major over p1 then p2, methods innermost.
std::vector<CoverageCell> coverage_grid(std::int64_t N, const GridSpec& grid,
                                        const std::vector<MethodSpec>& methods, unsigned threads = 0);
std::vector<CoverageCell> coverage_grid(const IntervalTable& table, const GridSpec& grid,
                                        unsigned threads = 0);

struct LengthOptions {
    double level = 0.95;
    double cap = 50.0;
    bool cap_relative = true;    ///< discard when length / N > cap (else length > cap)
    bool round_endpoints = true; ///< round non-integer endpoints to the nearest integer
    std::int64_t min_n11 = 2;
};

struct LengthRow {
    CaptureCounts counts;
    double rel_first;
    double rel_second;
    bool second_longer;
};

struct BoxSummary {
    std::size_t count = 0;
    double min = 0, q1 = 0, median = 0, q3 = 0, max = 0, mean = 0;
};

BoxSummary summarize(std::vector<double> values);

struct LengthReport {
    std::int64_t N = 0;
    LengthOptions options;
    std::string first_method;
    std::string second_method;
    std::size_t pre_filter_count = 0;
    std::size_t retained_count = 0;
    std::vector<LengthRow> rows;  ///< retained samples only
    BoxSummary first;
    BoxSummary second;
    /// Fraction of retained samples where the second method is strictly longer.
    double second_longer_fraction = 0.0;
    /// Same statistic with full-precision endpoints and the same retained set.
    double second_longer_fraction_unrounded = 0.0;
};

/// Relative lengths of `first` vs `second` over samples with n11 >= min_n11.
LengthReport length_study(std::int64_t N, const LengthOptions& options, const MethodSpec& first,
                          const MethodSpec& second);
/// GWD ell = 2 against Tlogit.
LengthReport length_study(std::int64_t N, const LengthOptions& options = {});

}  // namespace coverage
}  // namespace waring
