#include "waring/report.hpp"

#include "waring/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace waring::report {

namespace {

using nlohmann::ordered_json;

constexpr double kNA = std::numeric_limits<double>::quiet_NaN();

ordered_json extended_json(const Extended& e, int decimals = 6) {
    if (!e.is_finite()) return nullptr;
    return rounded(e.value(), decimals);
}

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

std::string lpad(const std::string& s, std::size_t width) {
    return s.size() >= width ? " " + s : std::string(width - s.size(), ' ') + s;
}

std::string integer(double v) { return std::to_string(static_cast<long long>(std::llround(v))); }

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_real(const std::string& s) {
    if (s == "NA") return kNA;
    if (s == "inf") return std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw DomainError("malformed number '" + s + "'");
    return v;
}

Extended parse_extended(const std::string& s) {
    if (s == "NA") return Extended::undefined();
    if (s == "inf") return Extended::infinite();
    return Extended::finite(parse_real(s));
}

}  // namespace

std::string fixed(double value, int decimals) {
    if (std::isnan(value)) return "NA";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    std::string s(buf);
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

double rounded(double value, int decimals) {
    const double scale = std::pow(10.0, decimals);
    const double r = std::round(value * scale) / scale;
    return r == 0.0 ? 0.0 : r;
}

std::vector<IntervalMethod> default_methods() {
    return {IntervalMethod::GwdCredible, IntervalMethod::Tlogit, IntervalMethod::Wald,
            IntervalMethod::LogNormal, IntervalMethod::ChapmanWald};
}

IntervalReport interval_report(const CaptureCounts& counts, double ell, double level,
                               const std::vector<IntervalMethod>& methods) {
    validate(counts);
    if (!(level > 0.0 && level < 1.0)) throw DomainError("level must lie in (0, 1)");
    if (!(ell >= 0) || !std::isfinite(ell)) throw DomainError("ell must be a finite value >= 0");

    IntervalReport report;
    report.counts = counts;
    report.ell = ell;
    report.level = level;
    if (counts.n11 >= 1) {
        const GwdParams flat{static_cast<double>(counts.n01) + 1, static_cast<double>(counts.n10) + 1,
                             static_cast<double>(counts.ncap()) + 1};
        if (flat.proper()) report.beta1 = gwd::skewness_beta1(flat);
    }
    for (IntervalMethod m : methods) {
        MethodRow row{m, std::nullopt, std::nullopt, {}};
        const bool gwd_like = m == IntervalMethod::GwdCredible || m == IntervalMethod::GwdNormalApprox;
        if (gwd_like) row.ell = ell;
        try {
            row.result = intervals::compute(m, counts, PriorSpec{ell}, level);
        } catch (const ImproperDistributionError&) {
            throw;
        } catch (const DomainError& e) {
            row.error = e.what();
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

ordered_json to_json(const IntervalReport& report) {
    ordered_json j;
    j["counts"] = {{"n10", report.counts.n10},
                   {"n01", report.counts.n01},
                   {"n11", report.counts.n11},
                   {"ncap", report.counts.ncap()}};
    j["ell"] = report.ell;
    j["level"] = report.level;
    j["beta1"] = extended_json(report.beta1);
    ordered_json methods = ordered_json::array();
    for (const auto& row : report.rows) {
        ordered_json m;
        m["method"] = std::string(to_string(row.method));
        m["ell"] = row.ell ? ordered_json(*row.ell) : ordered_json(nullptr);
        if (row.result) {
            m["lb"] = rounded(row.result->lb);
            m["ub"] = rounded(row.result->ub);
            m["point"] = rounded(row.result->pointN);
            m["below_ncap"] = row.result->below_ncap;
        } else {
            m["lb"] = nullptr;
            m["ub"] = nullptr;
            m["point"] = nullptr;
            m["error"] = "undefined: " + row.error;
        }
        m["beta1"] = extended_json(report.beta1);
        methods.push_back(std::move(m));
    }
    j["methods"] = std::move(methods);
    return j;
}

std::string to_text(const IntervalReport& report) {
    std::ostringstream out;
    const auto& c = report.counts;
    out << "counts: n10=" << c.n10 << " n01=" << c.n01 << " n11=" << c.n11 << " (ncap=" << c.ncap()
        << "), level " << fixed(report.level, 3) << "\n";
    out << "beta1 (ell=0 posterior): " << report.beta1.to_string(4) << "\n";
    out << pad("method", 14) << pad("ell", 6) << lpad("lb", 14) << lpad("ub", 14) << lpad("point", 14) << "\n";
    for (const auto& row : report.rows) {
        out << pad(std::string(to_string(row.method)), 14) << pad(row.ell ? fixed(*row.ell, 2) : "-", 6);
        if (!row.result) {
            out << "  undefined (" << row.error << ")\n";
            continue;
        }
        const bool integral = row.method == IntervalMethod::GwdCredible;
        auto num = [&](double v) { return integral ? integer(v) : fixed(v, 2); };
        out << lpad(num(row.result->lb), 14) << lpad(num(row.result->ub), 14)
            << lpad(fixed(row.result->pointN, 2), 14);
        if (row.result->below_ncap) out << "  (lb below ncap)";
        out << "\n";
    }
    return out.str();
}

ordered_json distribution_json(const GwdParams& params, std::int64_t ncap, double level,
                               double truncation) {
    validate(params);
    const double alpha = 1.0 - level;
    const std::int64_t last = gwd::quantile(params, truncation);
    ordered_json support = ordered_json::array();
    ordered_json n = ordered_json::array();
    ordered_json pmf = ordered_json::array();
    for (std::int64_t k = 0; k <= last; ++k) {
        support.push_back(k);
        n.push_back(ncap + k);
        pmf.push_back(gwd::pmf(params, k));
    }
    ordered_json j;
    j["params"] = {{"a", params.a}, {"b", params.b}, {"c", params.c}};
    j["ncap"] = ncap;
    j["level"] = level;
    j["truncation_quantile"] = truncation;
    j["support"] = std::move(support);
    j["n"] = std::move(n);
    j["pmf"] = std::move(pmf);
    j["lb"] = ncap + gwd::quantile(params, alpha / 2);
    j["ub"] = ncap + gwd::quantile(params, 1.0 - alpha / 2);
    return j;
}

std::vector<Table1Cell> table1() {
    constexpr std::array<double, 3> ells{2.0, 2.2, 3.0};
    constexpr std::array<std::int64_t, 6> ncaps{1, 2, 5, 10, 20, 50};
    constexpr std::int64_t reference[3][6] = {
        {38, 57, 114, 208, 398, 969},
        {23, 34, 67, 128, 235, 569},
        {8, 11, 22, 39, 74, 178},
    };
    std::vector<Table1Cell> cells;
    for (std::size_t i = 0; i < ells.size(); ++i) {
        for (std::size_t j = 0; j < ncaps.size(); ++j) {
            const GwdParams prior = petersen::prior(ncaps[j], PriorSpec{ells[i]});
            cells.push_back({ells[i], ncaps[j], gwd::quantile(prior, 0.95, QuantileRule::AtLeast),
                             gwd::quantile(prior, 0.95, QuantileRule::StrictlyAbove), reference[i][j]});
        }
    }
    return cells;
}

std::string render_table1(const std::vector<Table1Cell>& cells) {
    std::ostringstream out;
    out << "Prior 95th percentile of K = N - ncap, prior GWD(1, ncap+1, ncap+1+ell)\n";
    std::vector<std::int64_t> ncaps;
    std::vector<double> ells;
    for (const auto& c : cells) {
        if (std::find(ncaps.begin(), ncaps.end(), c.ncap) == ncaps.end()) ncaps.push_back(c.ncap);
        if (std::find(ells.begin(), ells.end(), c.ell) == ells.end()) ells.push_back(c.ell);
    }
    out << pad("ncap", 10);
    for (auto n : ncaps) out << lpad(std::to_string(n), 9);
    out << "\n";
    bool convention = false, other = false;
    for (double ell : ells) {
        out << pad("ell=" + fixed(ell, 1), 10);
        for (const auto& c : cells) {
            if (c.ell != ell) continue;
            std::string mark;
            if (c.value != c.reference) {
                if (c.strict_value == c.reference) {
                    mark = "*";
                    convention = true;
                } else {
                    mark = "+";
                    other = true;
                }
            }
            out << lpad(std::to_string(c.value) + mark, 9);
        }
        out << "\n";
    }
    if (convention) {
        out << "* reference value matches the strict-tail convention (largest k with Pr(K >= k) >= 0.05)\n";
    }
    if (other) {
        out << "+ differs from the reference value beyond the quantile convention:";
        for (const auto& c : cells) {
            if (c.value != c.reference && c.strict_value != c.reference) {
                out << " (ell=" << fixed(c.ell, 1) << ", ncap=" << c.ncap << ": reference " << c.reference
                    << ")";
            }
        }
        out << "\n";
    }
    return out.str();
}

ordered_json table1_json(const std::vector<Table1Cell>& cells) {
    ordered_json arr = ordered_json::array();
    for (const auto& c : cells) {
        arr.push_back({{"ell", c.ell},
                       {"ncap", c.ncap},
                       {"value", c.value},
                       {"strict_value", c.strict_value},
                       {"reference", c.reference}});
    }
    return arr;
}

std::vector<Table2Row> table2() {
    struct Spec {
        CaptureCounts counts;
        std::array<double, 7> reference;
    };
    const std::array<Spec, 4> specs{{
        {{493, 142, 7}, {5378, 21421, 5116, 20291, 4968, 18107, 7.1}},
        {{511, 232, 89}, {1853, 2565, 1852, 2562, 1843, 2545, 0.2}},
        {{1, 7, 5}, {13, 26, 13, 35, 13, 24, 40.2}},
        {{10, 3, 3}, {17, 69, 17, 74, 17, 54, kNA}},
    }};
    std::vector<Table2Row> rows;
    for (const auto& s : specs) {
        Table2Row row{s.counts,
                      intervals::gwd_credible(s.counts, PriorSpec{2.0}, 0.95),
                      intervals::tlogit(s.counts, 0.95),
                      intervals::gwd_credible(s.counts, PriorSpec{3.0}, 0.95),
                      petersen::posterior_summary(s.counts, PriorSpec{0.0}).beta1,
                      s.reference};
        rows.push_back(row);
    }
    return rows;
}

std::string render_table2(const std::vector<Table2Row>& rows) {
    std::ostringstream out;
    out << "95% credible (GWD, ell = 2, 3) and Tlogit confidence intervals for N\n";
    out << lpad("n10", 6) << lpad("n01", 6) << lpad("n11", 6) << lpad("ell2 Lb", 9) << lpad("Ub", 8)
        << lpad("Tlog Lb", 9) << lpad("Ub", 8) << lpad("ell3 Lb", 9) << lpad("Ub", 8) << lpad("beta1", 8)
        << "\n";
    for (const auto& r : rows) {
        out << lpad(std::to_string(r.counts.n10), 6) << lpad(std::to_string(r.counts.n01), 6)
            << lpad(std::to_string(r.counts.n11), 6) << lpad(integer(r.gwd2.lb), 9)
            << lpad(integer(r.gwd2.ub), 8) << lpad(integer(r.tlogit.lb), 9) << lpad(integer(r.tlogit.ub), 8)
            << lpad(integer(r.gwd3.lb), 9) << lpad(integer(r.gwd3.ub), 8) << lpad(r.beta1.to_string(1), 8)
            << "\n";
    }
    out << "Tlogit bounds rounded to the nearest integer; beta1 from the ell = 0 posterior.\n";
    return out.str();
}

ordered_json table2_json(const std::vector<Table2Row>& rows) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : rows) {
        arr.push_back({{"n10", r.counts.n10},
                       {"n01", r.counts.n01},
                       {"n11", r.counts.n11},
                       {"gwd2", {rounded(r.gwd2.lb), rounded(r.gwd2.ub)}},
                       {"tlogit", {rounded(r.tlogit.lb), rounded(r.tlogit.ub)}},
                       {"gwd3", {rounded(r.gwd3.lb), rounded(r.gwd3.ub)}},
                       {"beta1", extended_json(r.beta1)}});
    }
    return arr;
}

std::string coverage_csv_row(const CoverageCell& c) {
    std::string row = std::to_string(c.N);
    row += "," + fixed(c.probs.p1) + "," + fixed(c.probs.p2) + "," + c.method;
    row += "," + (c.ell ? fixed(*c.ell) : std::string("NA"));
    row += "," + fixed(c.level) + "," + fixed(c.coverage) + "," + c.expectedRelLength.to_string(6);
    return row;
}

void write_coverage_csv(std::ostream& out, const std::vector<CoverageCell>& cells) {
    out << kCoverageHeader << "\n";
    for (const auto& c : cells) out << coverage_csv_row(c) << "\n";
}

std::vector<CoverageCell> read_coverage_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCoverageHeader) {
        throw DomainError("coverage CSV: unexpected header");
    }
    std::vector<CoverageCell> cells;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 8) throw DomainError("coverage CSV: expected 8 fields in '" + line + "'");
        CoverageCell c;
        c.N = std::stoll(f[0]);
        c.probs = {parse_real(f[1]), parse_real(f[2])};
        c.method = f[3];
        if (f[4] != "NA") c.ell = parse_real(f[4]);
        c.level = parse_real(f[5]);
        c.coverage = parse_real(f[6]);
        c.expectedRelLength = parse_extended(f[7]);
        cells.push_back(std::move(c));
    }
    return cells;
}

void write_lengths_csv(std::ostream& out, const coverage::LengthReport& report) {
    out << kLengthsHeader << "\n";
    for (const auto& r : report.rows) {
        out << r.counts.n10 << "," << r.counts.n01 << "," << r.counts.n11 << "," << fixed(r.rel_first) << ","
            << fixed(r.rel_second) << "," << (r.second_longer ? 1 : 0) << "\n";
    }
}

std::vector<coverage::LengthRow> read_lengths_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kLengthsHeader) {
        throw DomainError("lengths CSV: unexpected header");
    }
    std::vector<coverage::LengthRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 6) throw DomainError("lengths CSV: expected 6 fields in '" + line + "'");
        rows.push_back({{std::stoll(f[0]), std::stoll(f[1]), std::stoll(f[2])},
                        parse_real(f[3]),
                        parse_real(f[4]),
                        f[5] == "1"});
    }
    return rows;
}

ordered_json length_summary_json(const coverage::LengthReport& report) {
    auto box = [](const coverage::BoxSummary& b) {
        return ordered_json{{"count", b.count},       {"min", rounded(b.min)}, {"q1", rounded(b.q1)},
                            {"median", rounded(b.median)}, {"q3", rounded(b.q3)}, {"max", rounded(b.max)},
                            {"mean", rounded(b.mean)}};
    };
    ordered_json j;
    j["N"] = report.N;
    j["level"] = report.options.level;
    j["min_n11"] = report.options.min_n11;
    j["cap"] = report.options.cap;
    j["cap_mode"] = report.options.cap_relative ? "relative" : "absolute";
    j["rounded_endpoints"] = report.options.round_endpoints;
    j["first_method"] = report.first_method;
    j["second_method"] = report.second_method;
    j["pre_filter_count"] = report.pre_filter_count;
    j["retained_count"] = report.retained_count;
    j["tlogit_longer_pct"] = rounded(100.0 * report.second_longer_fraction);
    j["tlogit_longer_pct_unrounded"] = rounded(100.0 * report.second_longer_fraction_unrounded);
    j["rel_len_gwd2"] = box(report.first);
    j["rel_len_tlogit"] = box(report.second);
    return j;
}

}  // namespace waring::report
