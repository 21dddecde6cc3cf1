// waring: intervals, tables and coverage studies for two-source capture-recapture.
//
// Exit codes: 0 ok, 2 invalid input, 3 I/O failure.

#include "waring/coverage.hpp"
#include "waring/errors.hpp"
#include "waring/report.hpp"
#include "waring/service.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace waring;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitIo = 3;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CountArgs {
    std::int64_t n10 = -1, n01 = -1, n11 = -1;
    double ell = 2.0;
    double level = 0.95;

    void attach(CLI::App* cmd) {
        cmd->add_option("--n10", n10, "caught by source 1 only")->required();
        cmd->add_option("--n01", n01, "caught by source 2 only")->required();
        cmd->add_option("--n11", n11, "caught by both sources")->required();
        cmd->add_option("--ell", ell, "prior tail parameter")->capture_default_str();
        cmd->add_option("--level", level, "credibility / confidence level")->capture_default_str();
    }
    CaptureCounts counts() const { return {n10, n01, n11}; }
};

void check_level(double level) {
    if (!(level > 0 && level < 1)) throw DomainError("--level must lie strictly between 0 and 1");
}

void check_ell(double ell) {
    if (!(ell >= 0)) throw DomainError("--ell must be >= 0");
}

// Writes to `path`, or stdout when it is empty or "-".
void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + ": " + std::strerror(errno));
    out << text;
    out.flush();
    if (!out) throw IoError("cannot write " + path + ": " + std::strerror(errno));
}

std::vector<MethodSpec> parse_methods(const std::string& list, double level) {
    std::vector<MethodSpec> out;
    std::istringstream ss(list);
    for (std::string item; std::getline(ss, item, ',');) out.push_back(parse_method_spec(item, level));
    if (out.empty()) throw DomainError("--methods must name at least one method");
    return out;
}

std::string summary_text(const CaptureCounts& c, const PosteriorSummary& s, const nlohmann::ordered_json& dist) {
    std::ostringstream os;
    os << "counts n10=" << c.n10 << " n01=" << c.n01 << " n11=" << c.n11 << " ncap=" << c.ncap() << "\n";
    os << "posterior K ~ GWD(" << report::fixed(s.params.a, 4) << ", " << report::fixed(s.params.b, 4) << ", "
       << report::fixed(s.params.c, 4) << ")\n";
    os << "E[K]    " << s.meanK.to_string(4) << "\n";
    os << "Var[K]  " << s.varK.to_string(4) << "\n";
    os << "mode K  " << s.modeK << "  (N = " << s.pointN << ")\n";
    os << "beta1   " << s.beta1.to_string(5) << "\n";
    os << "interval for N: [" << dist["lb"].dump() << ", " << dist["ub"].dump() << "] at level "
       << dist["level"].dump() << "\n";
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Capture-recapture intervals via the generalized Waring distribution"};
    app.require_subcommand(1);
    std::string format = "text";
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();

    // interval
    CountArgs interval_args;
    std::string interval_methods;
    auto* interval = app.add_subcommand("interval", "interval estimates of N for one sample");
    interval_args.attach(interval);
    interval->add_option("--methods", interval_methods,
                         "comma list of gwd,tlogit,wald,lognormal,chapman_wald,gwd_normal");

    // posterior
    CountArgs post_args;
    auto* posterior = app.add_subcommand("posterior", "posterior of K for one sample");
    post_args.attach(posterior);

    // prior
    std::int64_t prior_ncap = -1;
    double prior_ell = 2.0, prior_level = 0.95;
    auto* prior = app.add_subcommand("prior", "Waring prior of K given ncap");
    prior->add_option("--ncap", prior_ncap, "number of distinct units captured")->required();
    prior->add_option("--ell", prior_ell)->capture_default_str();
    prior->add_option("--level", prior_level)->capture_default_str();

    auto* table1 = app.add_subcommand("table1", "prior 95% upper bounds for K");
    auto* table2 = app.add_subcommand("table2", "intervals for the four reference samples");

    // coverage
    std::int64_t cov_N = 0;
    GridSpec grid;
    std::string cov_methods = "gwd:2,gwd:3,tlogit";
    double cov_level = 0.95;
    unsigned threads = 0;
    std::string cov_out;
    auto* cov = app.add_subcommand("coverage", "exact frequentist coverage over a (p1, p2) grid");
    cov->add_option("--N", cov_N, "population size")->required();
    cov->add_option("--start", grid.start)->capture_default_str();
    cov->add_option("--stop", grid.stop)->capture_default_str();
    cov->add_option("--step", grid.step)->capture_default_str();
    cov->add_option("--methods", cov_methods, "comma list, gwd:<ell> for GWD")->capture_default_str();
    cov->add_option("--level", cov_level)->capture_default_str();
    cov->add_option("--threads", threads, "worker threads, 0 = all cores")->capture_default_str();
    cov->add_option("--out", cov_out, "CSV output path (default stdout)");

    // lengths
    std::int64_t len_N = 0;
    coverage::LengthOptions len_opts;
    std::string len_out, len_summary;
    bool no_round = false;
    auto* lengths = app.add_subcommand("lengths", "relative interval lengths, GWD ell=2 vs Tlogit");
    lengths->add_option("--N", len_N, "population size")->required();
    lengths->add_option("--level", len_opts.level)->capture_default_str();
    lengths->add_option("--cap", len_opts.cap, "discard samples with length/N above this")->capture_default_str();
    lengths->add_flag("--no-round", no_round, "keep fractional interval endpoints");
    lengths->add_option("--out", len_out, "per-sample CSV path (default stdout)");
    lengths->add_option("--summary", len_summary, "write the JSON summary here");

    // serve
    std::string host = "127.0.0.1", static_dir;
    int port = service::default_port();
    auto* serve = app.add_subcommand("serve", "run the HTTP API");
    serve->add_option("--host", host)->capture_default_str();
    serve->add_option("--port", port)->check(CLI::Range(1, 65535))->capture_default_str();
    serve->add_option("--static-dir", static_dir, "directory served at /");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    const bool json = format == "json";
    try {
        if (*interval) {
            check_ell(interval_args.ell);
            check_level(interval_args.level);
            std::vector<IntervalMethod> methods = report::default_methods();
            if (!interval_methods.empty()) {
                methods.clear();
                std::istringstream ss(interval_methods);
                for (std::string m; std::getline(ss, m, ',');) methods.push_back(parse_method(m));
            }
            const auto rep = report::interval_report(interval_args.counts(), interval_args.ell, interval_args.level,
                                                     methods);
            emit("", json ? report::to_json(rep).dump(2) + "\n" : report::to_text(rep));
        } else if (*posterior) {
            check_ell(post_args.ell);
            check_level(post_args.level);
            const CaptureCounts c = post_args.counts();
            const auto summary = petersen::posterior_summary(c, PriorSpec{post_args.ell});
            const auto dist = report::distribution_json(summary.params, c.ncap(), post_args.level);
            emit("", json ? dist.dump(2) + "\n" : summary_text(c, summary, dist));
        } else if (*prior) {
            check_ell(prior_ell);
            check_level(prior_level);
            if (prior_ncap < 1) throw DomainError("--ncap must be >= 1");
            const GwdParams p = petersen::prior(prior_ncap, PriorSpec{prior_ell});
            if (!p.proper()) throw ImproperDistributionError("prior is improper for ell <= 1; use ell >= 2");
            const auto dist = report::distribution_json(p, prior_ncap, prior_level);
            if (json) {
                emit("", dist.dump(2) + "\n");
            } else {
                std::ostringstream os;
                os << "prior K ~ GWD(1, " << prior_ncap + 1 << ", " << report::fixed(p.c, 4) << ")\n"
                   << "mean K " << gwd::mean(p).to_string(4) << "\n"
                   << "interval for N: [" << dist["lb"].dump() << ", " << dist["ub"].dump() << "]\n";
                emit("", os.str());
            }
        } else if (*table1) {
            const auto cells = report::table1();
            emit("", json ? report::table1_json(cells).dump(2) + "\n" : report::render_table1(cells));
        } else if (*table2) {
            const auto rows = report::table2();
            emit("", json ? report::table2_json(rows).dump(2) + "\n" : report::render_table2(rows));
        } else if (*cov) {
            check_level(cov_level);
            if (cov_N < 1) throw DomainError("--N must be >= 1");
            const auto methods = parse_methods(cov_methods, cov_level);
            grid.points();  // validates before the expensive part
            const auto cells = coverage::coverage_grid(cov_N, grid, methods, threads);
            std::ostringstream os;
            report::write_coverage_csv(os, cells);
            emit(cov_out, os.str());
        } else if (*lengths) {
            check_level(len_opts.level);
            if (len_N < 1) throw DomainError("--N must be >= 1");
            if (!(len_opts.cap > 0)) throw DomainError("--cap must be > 0");
            len_opts.round_endpoints = !no_round;
            const auto rep = coverage::length_study(len_N, len_opts);
            std::ostringstream os;
            report::write_lengths_csv(os, rep);
            emit(len_out, os.str());
            const std::string summary = report::length_summary_json(rep).dump(2) + "\n";
            if (!len_summary.empty()) {
                emit(len_summary, summary);
            } else if (!len_out.empty() && len_out != "-") {
                emit("", summary);
            }
        } else if (*serve) {
            service::Options opts;
            opts.static_dir = static_dir;
            std::cerr << "listening on http://" << host << ":" << port << "\n";
            if (!service::serve(host, port, opts)) throw IoError("cannot bind " + host + ":" + std::to_string(port));
        }
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
