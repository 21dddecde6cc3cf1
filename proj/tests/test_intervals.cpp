#include "waring/errors.hpp"
#include "waring/gwd.hpp"
#include "waring/intervals.hpp"

#include <doctest.h>

#include <cmath>

using namespace waring;
using doctest::Approx;

TEST_CASE("z quantile") {
    CHECK(intervals::z_quantile(0.975) == Approx(1.959963984540054).epsilon(1e-14));
    CHECK(intervals::z_quantile(0.5) == 0.0);
    CHECK_THROWS_AS(intervals::z_quantile(1.0), DomainError);
}

TEST_CASE("method names round trip") {
    for (auto m : {IntervalMethod::GwdCredible, IntervalMethod::Wald, IntervalMethod::ChapmanWald,
                   IntervalMethod::LogNormal, IntervalMethod::Tlogit, IntervalMethod::GwdNormalApprox})
        CHECK(parse_method(to_string(m)) == m);
    CHECK_THROWS_AS(parse_method("bogus"), DomainError);
}

TEST_CASE("gwd credible") {
    auto r = intervals::gwd_credible({511, 232, 89}, {2}, 0.95);
    CHECK(r.lb == 1853);
    CHECK(r.ub == 2565);
    r = intervals::gwd_credible({1, 7, 5}, {3}, 0.95);
    CHECK(r.lb == 13);
    CHECK(r.ub == 24);
    r = intervals::gwd_credible({493, 142, 7}, {2}, 0.95);
    CHECK(r.lb == 5378);
    CHECK(r.ub == 21421);
    CHECK(r.ell == 2.0);
    r = intervals::gwd_credible({10, 3, 3}, {2}, 0.95);
    CHECK(r.lb == 17);
    CHECK(r.ub == 69);
    CHECK(r.pointN == 21);
    CHECK_THROWS_AS(intervals::gwd_credible({10, 3, 0}, {1}, 0.95), ImproperDistributionError);
}

TEST_CASE("normal approximation") {
    const GwdParams calm = petersen::posterior({511, 232, 89}, {2});
    const double exact = gwd::quantile(calm, 0.975);
    CHECK(std::abs(intervals::gwd_normal_approx_quantile({511, 232, 89}, {2}, 0.975) - exact) < 0.05 * exact);

    const GwdParams skew = petersen::posterior({493, 142, 7}, {2});
    const double exact_skew = gwd::quantile(skew, 0.975);
    CHECK(intervals::gwd_normal_approx_quantile({493, 142, 7}, {2}, 0.975) < 0.9 * exact_skew);

    // z = 0 leaves the centre term (n01+1)(n10+1)/(n11+ell)
    CHECK(intervals::gwd_normal_approx_quantile({511, 232, 89}, {2}, 0.5) == Approx(233.0 * 512.0 / 91.0).epsilon(1e-14));
    CHECK_THROWS_AS(intervals::gwd_normal_approx_quantile({5, 5, 1}, {2}, 0.9), DomainError);
}

TEST_CASE("wald") {
    auto r = intervals::wald({493, 142, 7}, 0.95);
    CHECK(r.lb == Approx(3000.16).epsilon(1e-5));
    CHECK(r.ub == Approx(18285.56).epsilon(1e-5));
    r = intervals::wald({0, 7, 4}, 0.95);
    CHECK(r.lb == r.ub);
    CHECK(r.lb == 11);
    CHECK_THROWS_AS(intervals::wald({3, 4, 0}, 0.95), DomainError);
    CHECK(intervals::wald({30, 30, 1}, 0.95).below_ncap);
}

TEST_CASE("chapman wald") {
    auto r = intervals::chapman_wald({493, 142, 7}, 0.95);
    CHECK(std::abs(r.lb - 3470) <= 1);
    CHECK(std::abs(r.ub - 15316) <= 1);
    r = intervals::chapman_wald({511, 232, 89}, 0.95);
    CHECK(std::abs(r.lb - 1803) <= 1);
    CHECK(std::abs(r.ub - 2495) <= 1);
    CHECK_NOTHROW(intervals::chapman_wald({3, 4, 0}, 0.95));
}

TEST_CASE("sigma_k2 and lognormal") {
    CHECK(intervals::sigma_k2({1, 1, 1}) == Approx(4.0).epsilon(1e-15));
    CHECK(intervals::sigma_k2({511, 232, 89}) == Approx(321.0 * 600.0 / 10551128.0).epsilon(1e-13));
    CHECK_THROWS_AS(intervals::sigma_k2({0, 3, 3}), DomainError);
    const auto ln = intervals::lognormal({511, 232, 89}, 0.95);
    const auto tl = intervals::tlogit({511, 232, 89}, 0.95);
    CHECK(std::abs(ln.lb - tl.lb) < 0.01 * tl.lb);
    CHECK(std::abs(ln.ub - tl.ub) < 0.01 * tl.ub);
    // level -> 0 collapses onto the Petersen estimate
    const auto tiny = intervals::lognormal({511, 232, 89}, 1e-9);
    CHECK(tiny.lb == Approx(832 + 511.0 * 232.0 / 89.0).epsilon(1e-7));
    CHECK(tiny.ub == Approx(tiny.lb).epsilon(1e-7));
}

TEST_CASE("tlogit") {
    auto r = intervals::tlogit({493, 142, 7}, 0.95);
    CHECK(std::abs(std::round(r.lb) - 5116) <= 1);
    CHECK(std::abs(std::round(r.ub) - 20291) <= 1);
    r = intervals::tlogit({1, 7, 5}, 0.95);
    CHECK(std::round(r.lb) == 13);
    CHECK(std::round(r.ub) == 35);
    r = intervals::tlogit({10, 3, 3}, 0.95);
    CHECK(std::round(r.lb) == 17);
    CHECK(std::round(r.ub) == 74);
    CHECK_NOTHROW(intervals::tlogit({0, 0, 0}, 0.95));
    CHECK(intervals::tlogit({4, 0, 2}, 0.95).lb >= 6 - 0.5);
}

TEST_CASE("compute dispatch and level checks") {
    CHECK(intervals::compute(IntervalMethod::GwdCredible, {10, 3, 3}, {3}, 0.95).ub == 54);
    CHECK_THROWS_AS(intervals::compute(IntervalMethod::Tlogit, {10, 3, 3}, {2}, 1.5), DomainError);
    CHECK_THROWS_AS(intervals::compute(IntervalMethod::Tlogit, {10, 3, 3}, {2}, 0.0), DomainError);
}
