#include "waring/service.hpp"

#include "waring/coverage.hpp"
#include "waring/errors.hpp"
#include "waring/report.hpp"

#include <httplib.h>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>

namespace waring::service {

namespace {

using nlohmann::ordered_json;

// Collects per-field validation messages; a non-empty set becomes a 400.
class FieldErrors {
public:
    void add(const std::string& field, const std::string& message) { errors_[field] = message; }
    bool empty() const { return errors_.empty(); }
    ordered_json to_json() const {
        ordered_json j = ordered_json::object();
        for (const auto& [k, v] : errors_) j[k] = v;
        return {{"errors", j}};
    }

private:
    std::map<std::string, std::string> errors_;
};

void send_json(httplib::Response& res, int status, const ordered_json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
    send_json(res, status, {{"error", message}});
}

std::optional<double> parse_number(const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size() || !std::isfinite(v)) return std::nullopt;
        return v;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

// Source of named values: a JSON body or a query string.
class Fields {
public:
    explicit Fields(const ordered_json& body) : body_(&body) {}
    explicit Fields(const httplib::Request& req) : req_(&req) {}

    bool has(const std::string& name) const {
        return body_ ? body_->contains(name) && !(*body_)[name].is_null() : req_->has_param(name);
    }

    std::optional<double> number(const std::string& name) const {
        if (body_) {
            const auto& v = (*body_)[name];
            if (!v.is_number()) return std::nullopt;
            const double d = v.get<double>();
            if (!std::isfinite(d)) return std::nullopt;
            return d;
        }
        return parse_number(req_->get_param_value(name));
    }

private:
    const ordered_json* body_ = nullptr;
    const httplib::Request* req_ = nullptr;
};

std::int64_t count_field(const Fields& f, const std::string& name, FieldErrors& errors, bool required = true,
                         std::int64_t fallback = 0) {
    if (!f.has(name)) {
        if (required) errors.add(name, "required");
        return fallback;
    }
    const auto v = f.number(name);
    if (!v || *v < 0 || std::floor(*v) != *v || *v > 1e12) {
        errors.add(name, "must be a non-negative integer");
        return fallback;
    }
    return static_cast<std::int64_t>(*v);
}

double ell_field(const Fields& f, FieldErrors& errors) {
    if (!f.has("ell")) return 2.0;
    const auto v = f.number("ell");
    if (!v || *v < 0) {
        errors.add("ell", "must be a number >= 0");
        return 2.0;
    }
    return *v;
}

double level_field(const Fields& f, FieldErrors& errors) {
    if (!f.has("level")) return 0.95;
    const auto v = f.number("level");
    if (!v || !(*v > 0 && *v < 1)) {
        errors.add("level", "must lie strictly between 0 and 1");
        return 0.95;
    }
    return *v;
}

CaptureCounts counts_fields(const Fields& f, FieldErrors& errors) {
    CaptureCounts c{count_field(f, "n10", errors), count_field(f, "n01", errors),
                    count_field(f, "n11", errors)};
    if (errors.empty() && c.ncap() < 1) errors.add("counts", "at least one unit must be captured");
    return c;
}

void handle_interval(const httplib::Request& req, httplib::Response& res) {
    ordered_json body;
    try {
        body = ordered_json::parse(req.body);
    } catch (const std::exception&) {
        send_json(res, 400, {{"errors", {{"body", "must be a JSON object"}}}});
        return;
    }
    if (!body.is_object()) {
        send_json(res, 400, {{"errors", {{"body", "must be a JSON object"}}}});
        return;
    }
    FieldErrors errors;
    const Fields fields(body);
    const CaptureCounts counts = counts_fields(fields, errors);
    const double ell = ell_field(fields, errors);
    const double level = level_field(fields, errors);
    if (!errors.empty()) {
        send_json(res, 400, errors.to_json());
        return;
    }
    try {
        send_json(res, 200, report::to_json(report::interval_report(counts, ell, level)));
    } catch (const ImproperDistributionError& e) {
        send_error(res, 422, e.what());
    } catch (const DomainError& e) {
        send_error(res, 400, e.what());
    }
}

void handle_posterior(const httplib::Request& req, httplib::Response& res) {
    FieldErrors errors;
    const Fields fields(req);
    const CaptureCounts counts = counts_fields(fields, errors);
    const double ell = ell_field(fields, errors);
    const double level = level_field(fields, errors);
    if (!errors.empty()) {
        send_json(res, 400, errors.to_json());
        return;
    }
    try {
        const GwdParams post = petersen::posterior(counts, PriorSpec{ell});
        send_json(res, 200, report::distribution_json(post, counts.ncap(), level));
    } catch (const ImproperDistributionError& e) {
        send_error(res, 422, e.what());
    } catch (const DomainError& e) {
        send_error(res, 400, e.what());
    }
}

void handle_prior(const httplib::Request& req, httplib::Response& res) {
    FieldErrors errors;
    const Fields fields(req);
    const std::int64_t ncap = count_field(fields, "ncap", errors);
    const double ell = ell_field(fields, errors);
    const double level = level_field(fields, errors);
    if (errors.empty() && ncap < 1) errors.add("ncap", "must be >= 1");
    if (!errors.empty()) {
        send_json(res, 400, errors.to_json());
        return;
    }
    const GwdParams prior = petersen::prior(ncap, PriorSpec{ell});
    if (!prior.proper()) {
        send_error(res, 422, "prior GWD(1, ncap+1, ncap+1+ell) is improper for ell <= 1; use ell >= 2");
        return;
    }
    try {
        send_json(res, 200, report::distribution_json(prior, ncap, level));
    } catch (const DomainError& e) {
        send_error(res, 400, e.what());
    }
}

void handle_coverage(const httplib::Request& req, httplib::Response& res, const Options& options) {
    FieldErrors errors;
    const Fields fields(req);
    const std::int64_t N = count_field(fields, "N", errors);
    const double level = level_field(fields, errors);
    if (errors.empty() && N < 1) errors.add("N", "must be >= 1");
    GridSpec grid;
    for (auto [name, slot] : {std::pair{"start", &grid.start}, {"stop", &grid.stop}, {"step", &grid.step}}) {
        if (!fields.has(name)) continue;
        const auto v = fields.number(name);
        if (!v) {
            errors.add(name, "must be a number");
        } else {
            *slot = *v;
        }
    }
    std::vector<MethodSpec> methods;
    const std::string list = req.has_param("methods") ? req.get_param_value("methods") : "gwd:2,gwd:3,tlogit";
    std::istringstream ss(list);
    for (std::string item; std::getline(ss, item, ',');) {
        try {
            methods.push_back(parse_method_spec(item, level));
        } catch (const DomainError& e) {
            errors.add("methods", e.what());
        }
    }
    if (methods.empty() && errors.empty()) errors.add("methods", "at least one method is required");
    try {
        grid.points();
    } catch (const DomainError& e) {
        errors.add("grid", e.what());
    }
    if (!errors.empty()) {
        send_json(res, 400, errors.to_json());
        return;
    }
    if (N > options.max_coverage_N) {
        send_error(res, 413, "N = " + std::to_string(N) + " exceeds the service limit of " +
                                 std::to_string(options.max_coverage_N) + "; use the command-line tool");
        return;
    }
    auto cells = std::make_shared<std::vector<CoverageCell>>(
        coverage::coverage_grid(N, grid, methods, options.coverage_threads));
    res.set_chunked_content_provider("text/csv", [cells, row = std::size_t{0}](std::size_t,
                                                                             httplib::DataSink& sink) mutable {
        if (row == 0) {
            const std::string header = std::string(report::kCoverageHeader) + "\n";
            sink.write(header.data(), header.size());
        }
        // A few hundred rows per chunk.
        for (std::size_t end = std::min(cells->size(), row + 256); row < end; ++row) {
            const std::string line = report::coverage_csv_row((*cells)[row]) + "\n";
            sink.write(line.data(), line.size());
        }
        if (row >= cells->size()) sink.done();
        return true;
    });
}

}  // namespace

int default_port() {
    if (const char* env = std::getenv("WARING_PORT")) {
        const auto v = parse_number(env);
        if (v && *v >= 1 && *v <= 65535 && std::floor(*v) == *v) return static_cast<int>(*v);
    }
    return 8080;
}

void install_routes(httplib::Server& server, const Options& options) {
    server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("ok", "text/plain");
    });
    server.Post("/api/interval", handle_interval);
    server.Get("/api/posterior", handle_posterior);
    server.Get("/api/prior", handle_prior);
    server.Get("/api/coverage", [options](const httplib::Request& req, httplib::Response& res) {
        handle_coverage(req, res, options);
    });
    server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string what = "internal error";
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            what = e.what();
        } catch (...) {
        }
        send_error(res, 500, what);
    });
    if (!options.static_dir.empty()) server.set_mount_point("/", options.static_dir);
}

bool serve(const std::string& host, int port, const Options& options) {
    httplib::Server server;
    install_routes(server, options);
    return server.listen(host, port);
}

}  // namespace waring::service
