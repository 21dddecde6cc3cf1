#include "waring/errors.hpp"
#include "waring/gwd.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace waring;
using doctest::Approx;

TEST_CASE("log_pochhammer") {
    CHECK(gwd::log_pochhammer(3.0, 0) == 0.0);
    CHECK(gwd::log_pochhammer(1.0, 4) == Approx(std::log(24.0)).epsilon(1e-14));
    CHECK(gwd::log_pochhammer(2.5, 3) == Approx(std::log(2.5 * 3.5 * 4.5)).epsilon(1e-14));
    // all three evaluation regimes against a long product
    for (std::int64_t k : {10, 17, 200, 5000}) {
        double ref = 0.0;
        for (std::int64_t i = 0; i < k; ++i) ref += std::log(7.25 + i);
        CHECK(gwd::log_pochhammer(7.25, k) == Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("normalising constant") {
    CHECK(gwd::norm_const({1, 1, 3}) == Approx(2.0).epsilon(1e-14));
    CHECK(gwd::norm_const({8, 2, 14}) == Approx(7.8).epsilon(1e-13));
    CHECK(gwd::norm_const({2, 8, 14}) == Approx(gwd::norm_const({8, 2, 14})).epsilon(1e-15));
}

TEST_CASE("validate rejects improper triples") {
    CHECK_THROWS_AS(validate(GwdParams{1, 1, 2}), DomainError);
    CHECK_THROWS_AS(validate(GwdParams{0, 1, 3}), DomainError);
    CHECK_THROWS_AS(validate(GwdParams{1, -1, 3}), DomainError);
    CHECK_NOTHROW(validate(GwdParams{1, 1, 2.0001}));
    CHECK_THROWS_AS(gwd::pmf({2, 2, 4}, 0), DomainError);
}

TEST_CASE("pmf") {
    CHECK(gwd::pmf({1, 1, 3}, 0) == Approx(0.5).epsilon(1e-14));
    for (int k = 0; k < 30; ++k) CHECK(gwd::pmf({1, 1, 3}, k) == Approx(1.0 / ((k + 1.0) * (k + 2.0))).epsilon(1e-12));
    CHECK(gwd::pmf({4, 11, 19}, 5) == Approx(gwd::pmf({4, 11, 19}, 6)).epsilon(1e-13));
    // mpmath, 40 digits
    CHECK(gwd::pmf({4, 11, 19}, 5) == Approx(0.057163368780006281689).epsilon(1e-12));
    CHECK(gwd::pmf({4, 11, 19}, 50) == Approx(0.0015861333207047785925).epsilon(1e-12));
    CHECK(gwd::pmf({4, 11, 19}, -1) == 0.0);
}

TEST_CASE("cdf and survival") {
    CHECK(gwd::cdf({1, 1, 3}, 0) == Approx(0.5).epsilon(1e-14));
    CHECK(gwd::cdf({1, 1, 3}, -3) == 0.0);
    CHECK(gwd::cdf({1, 2, 4}, 37) == Approx(0.95).epsilon(1e-14));
    for (int k : {0, 1, 5, 40, 1000}) CHECK(gwd::survival({1, 2, 4}, k) == Approx(2.0 / (k + 2)).epsilon(1e-13));
    CHECK(gwd::survival({1, 3, 5}, 57) == Approx(0.05).epsilon(1e-13));
    CHECK(gwd::survival({4, 11, 19}, 0) == 1.0);
    CHECK(gwd::cdf({4, 11, 19}, 10) == Approx(0.5).epsilon(1e-12));
    CHECK(gwd::cdf({4, 11, 19}, 50) == Approx(0.97126263842079922966).epsilon(1e-12));
    CHECK(gwd::cdf({1, 1, 3}, 100000000) == Approx(1.0).epsilon(1e-7));
}

TEST_CASE("cdf of a concentrated posterior, both paths") {
    const GwdParams p{143, 494, 651};
    // mpmath summation, 40 digits
    const std::pair<std::int64_t, double> ref[] = {{1000, 2.0322138029614188456e-12},
                                                   {2000, 0.00010086393149652265048},
                                                   {5000, 0.4581698039961820784},
                                                   {9000, 0.96511253388775356453},
                                                   {20000, 0.99996814049213154067}};
    for (auto [k, v] : ref) {
        CHECK(std::abs(gwd::cdf_quadrature(p, k) - v) < 1e-10);
        CHECK(std::abs(gwd::cdf_summation(p, k) - v) < 1e-11);
        CHECK(std::abs(gwd::cdf(p, k) - v) < 1e-10);
    }
}

TEST_CASE("tail bound") {
    const GwdParams p{1, 2, 4};
    for (std::int64_t m : {0, 5, 50, 500}) {
        const double tail = gwd::survival(p, m + 1);
        const double bound = gwd::tail_bound(p, m);
        CHECK(bound >= tail);
        CHECK(bound < 10 * tail + 1e-300);
    }
    const std::int64_t m = gwd::truncation_point({4, 11, 19}, 1e-8);
    CHECK(1.0 - gwd::cdf_summation({4, 11, 19}, m) <= 1e-8);
}

TEST_CASE("quantile") {
    CHECK(gwd::quantile({1, 2, 4}, 0.95) == 37);
    CHECK(gwd::quantile({1, 2, 4}, 0.95, QuantileRule::StrictlyAbove) == 38);
    CHECK(gwd::quantile({1, 1, 3}, 0.5) == 0);
    CHECK(gwd::quantile({4, 11, 19}, 0.5) == 10);
    CHECK(gwd::quantile({4, 11, 19}, 0.5, QuantileRule::StrictlyAbove) == 11);
    CHECK_THROWS_AS(gwd::quantile({1, 2, 4}, 1.0), DomainError);
    CHECK_THROWS_AS(gwd::quantile({1, 2, 4}, -0.1), DomainError);
}

TEST_CASE("moments") {
    CHECK(gwd::mean({143, 494, 645}).value() == Approx(143.0 * 494.0 / 7.0).epsilon(1e-13));
    CHECK(gwd::mean({1, 1, 3}).kind() == Extended::Kind::Infinite);
    CHECK(gwd::variance({1, 1, 4}).kind() == Extended::Kind::Infinite);
    // mpmath truncated sums
    CHECK(std::sqrt(gwd::variance({233, 512, 835}).value()) == Approx(181.98968367596767).epsilon(1e-12));
    CHECK(std::sqrt(gwd::variance({233, 512, 833}).value()) == Approx(187.4).epsilon(1e-3));
    CHECK(gwd::mean({233, 512, 835}).value() == Approx(1340.404494382022).epsilon(1e-13));
}

TEST_CASE("skewness") {
    CHECK(gwd::skewness_beta1({8, 2, 14}).value() == Approx(35378.0 / 880.0).epsilon(1e-12));
    CHECK(gwd::skewness_beta1({143, 494, 643}).value() == Approx(7.1).epsilon(0.05 / 7.1));
    CHECK(gwd::skewness_beta1({4, 11, 17}).kind() == Extended::Kind::Undefined);
    CHECK(gwd::skewness_beta1({4, 11, 17}).to_string() == "NA");
}

TEST_CASE("mode") {
    CHECK(gwd::mode({1, 5, 9}) == 0);
    CHECK(gwd::mode({1, 50, 52.5}) == 0);
    CHECK(gwd::mode({4, 11, 19}) == 5);
    CHECK(gwd::mode({8, 2, 14}) == 1);
    CHECK(gwd::mode({0.5, 0.5, 3}) == 0);
}

TEST_CASE("shift_conditional") {
    CHECK(gwd::shift_conditional({1, 2, 4}, 3) == GwdParams{1, 5, 7});
    CHECK(gwd::shift_conditional({1, 2, 4}, 0) == GwdParams{1, 2, 4});
    CHECK_THROWS_AS(gwd::shift_conditional({2, 2, 6}, 1), DomainError);
}

TEST_CASE("negative binomial") {
    for (int k = 0; k < 10; ++k) CHECK(gwd::nb_pmf({1, 0.5}, k) == Approx(std::pow(0.5, k + 1)).epsilon(1e-14));
    CHECK(gwd::nb_pmf({2, 0.3}, 0) == Approx(0.09).epsilon(1e-14));
    CHECK_THROWS_AS(gwd::nb_pmf({2, 1.5}, 0), DomainError);
}

TEST_CASE("sampling") {
    std::mt19937_64 rng(20260415);
    const int n = 1000000;
    SUBCASE("mean of GWD(1,1,4)") {
        double sum = 0, sum2 = 0;
        for (int i = 0; i < n; ++i) {
            const double y = static_cast<double>(gwd::sample({1, 1, 4}, rng));
            sum += y;
            sum2 += y * y;
        }
        // variance is infinite here; use the sample spread as a conservative yardstick
        const double m = sum / n;
        const double se = std::sqrt((sum2 / n - m * m) / n);
        // ab / (c - a - b - 1) = 1
        CHECK(std::abs(m - 1.0) < 3 * se);
    }
    SUBCASE("zero mass of GWD(1,1,3)") {
        int zeros = 0;
        for (int i = 0; i < n; ++i) zeros += gwd::sample({1, 1, 3}, rng) == 0;
        const double se = std::sqrt(0.25 / n);
        CHECK(std::abs(zeros / double(n) - 0.5) < 3 * se);
    }
}

TEST_CASE("Extended") {
    CHECK(Extended::finite(1.5).to_string(2) == "1.50");
    CHECK(Extended::infinite().to_string() == "inf");
    CHECK(Extended::undefined().value_or(-1) == -1);
    CHECK_THROWS_AS(Extended::undefined().value(), DomainError);
}
