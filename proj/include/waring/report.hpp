#pragma once

// Rendering shared by the command-line tool and the HTTP service, so both
// answer identical inputs with identical numbers.

#include "waring/coverage.hpp"
#include "waring/intervals.hpp"
#include "waring/petersen.hpp"

#include <json.hpp>

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace waring::report {

/// Fixed-point with `decimals` places ("-0.000000" normalised to "0.000000").
std::string fixed(double value, int decimals = 6);
/// Rounds to `decimals` places, for JSON numbers that must be byte-stable.
double rounded(double value, int decimals = 6);

struct MethodRow {
    IntervalMethod method;
    std::optional<double> ell;
    std::optional<IntervalResult> result;  ///< empty when undefined for these counts
    std::string error;
};

struct IntervalReport {
    CaptureCounts counts;
    double ell = 2.0;
    double level = 0.95;
    Extended beta1 = Extended::undefined();  ///< skewness of the ell = 0 posterior
    std::vector<MethodRow> rows;
};

std::vector<IntervalMethod> default_methods();

/// Throws DomainError for invalid counts/level and ImproperDistributionError
/// when a GWD method is requested with n11 + ell <= 1.  Other methods that are
/// undefined for the counts (Wald with n11 = 0) produce rows with an error.
IntervalReport interval_report(const CaptureCounts& counts, double ell, double level,
                               const std::vector<IntervalMethod>& methods = default_methods());

nlohmann::ordered_json to_json(const IntervalReport& report);
std::string to_text(const IntervalReport& report);

/// pmf over K = 0..q where q is the `truncation` quantile, plus N-scale bounds
/// at `level`.
nlohmann::ordered_json distribution_json(const GwdParams& params, std::int64_t ncap, double level,
                                         double truncation = 0.999);

struct Table1Cell {
    double ell;
    std::int64_t ncap;
    std::int64_t value;         ///< smallest m with cdf(m) >= 0.95
    std::int64_t strict_value;  ///< largest k with Pr(K >= k) >= 0.05
    std::int64_t reference;
};

std::vector<Table1Cell> table1();
std::string render_table1(const std::vector<Table1Cell>& cells);

struct Table2Row {
    CaptureCounts counts;
    IntervalResult gwd2;
    IntervalResult tlogit;
    IntervalResult gwd3;
    Extended beta1 = Extended::undefined();
    std::array<double, 7> reference;  ///< lb/ub for ell=2, Tlogit, ell=3, then beta1 (NaN = NA)
};

std::vector<Table2Row> table2();
std::string render_table2(const std::vector<Table2Row>& rows);
nlohmann::ordered_json table1_json(const std::vector<Table1Cell>& cells);
nlohmann::ordered_json table2_json(const std::vector<Table2Row>& rows);

// Coverage CSV: N,p1,p2,method,ell,level,coverage,expected_rel_length
inline constexpr const char* kCoverageHeader = "N,p1,p2,method,ell,level,coverage,expected_rel_length";
void write_coverage_csv(std::ostream& out, const std::vector<CoverageCell>& cells);
std::string coverage_csv_row(const CoverageCell& cell);
std::vector<CoverageCell> read_coverage_csv(std::istream& in);

// Lengths CSV: n10,n01,n11,rel_len_gwd2,rel_len_tlogit,tlogit_longer
inline constexpr const char* kLengthsHeader = "n10,n01,n11,rel_len_gwd2,rel_len_tlogit,tlogit_longer";
void write_lengths_csv(std::ostream& out, const coverage::LengthReport& report);
std::vector<coverage::LengthRow> read_lengths_csv(std::istream& in);

nlohmann::ordered_json length_summary_json(const coverage::LengthReport& report);

}  // namespace waring::report
