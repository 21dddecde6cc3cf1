#pragma once

// Generalized Waring distribution GWD(a, b, c) on {0, 1, 2, ...}:
//
//   Pr(Y = k) = (1 / C_w) * (a)_k (b)_k / ((c)_k k!),   c > a + b,
//
// with C_w = Gamma(c-a-b) Gamma(c) / (Gamma(c-b) Gamma(c-a)).  Equivalently
// a negative binomial NB(a, p) whose success probability p ~ Beta(c-a-b, b).
//
// Everything is evaluated in log space; supports reach tens of thousands.

#include <cstdint>
#include <random>
#include <string>

namespace waring {

/// A real value that may be infinite or undefined (moments that do not exist).
class Extended {
public:
    enum class Kind { Finite, Infinite, Undefined };

    static Extended finite(double v) { return Extended(Kind::Finite, v); }
    static Extended infinite() { return Extended(Kind::Infinite, 0.0); }
    static Extended undefined() { return Extended(Kind::Undefined, 0.0); }

    Kind kind() const { return kind_; }
    bool is_finite() const { return kind_ == Kind::Finite; }
    /// Throws DomainError unless finite.
    double value() const;
    double value_or(double fallback) const { return is_finite() ? value_ : fallback; }

    /// "NA" when undefined, "inf" when infinite, else fixed with `decimals` places.
    std::string to_string(int decimals = 6) const;

    friend bool operator==(const Extended&, const Extended&) = default;

private:
    Extended(Kind kind, double v) : kind_(kind), value_(v) {}
    Kind kind_;
    double value_;
};

struct GwdParams {
    double a;
    double b;
    double c;

    /// c > a + b with all three positive.
    bool proper() const { return a > 0 && b > 0 && c > 0 && c > a + b; }
    /// c - a - b, the first Beta shape of the mixing distribution.
    double tail_index() const { return c - a - b; }

    friend bool operator==(const GwdParams&, const GwdParams&) = default;
};

/// Throws DomainError unless a, b > 0 and c > a + b.
void validate(const GwdParams& params);

struct NegBinParams {
    double a;  ///< shape
    double p;  ///< success probability in (0, 1)
};

enum class CdfMethod {
    Quadrature,  ///< E_p[I_p(a, k+1)] over p ~ Beta(c-a-b, b); production path
    Summation,   ///< compensated sum of the pmf; O(k), used as an oracle
};

enum class QuantileRule {
    AtLeast,        ///< smallest m with cdf(m) >= q
    StrictlyAbove,  ///< smallest m with cdf(m) > q, i.e. largest k with Pr(Y >= k) >= 1 - q
};

/// Absolute slack within which a CDF value is considered equal to a probability level.
inline constexpr double kQuantileTieTolerance = 1e-12;

namespace gwd {

/// log of the rising factorial (x)_k = Gamma(x+k)/Gamma(x); exactly 0 for k = 0.
double log_pochhammer(double x, std::int64_t k);

double log_norm_const(const GwdParams& params);
/// C_w by Gauss' summation rule.
double norm_const(const GwdParams& params);

double log_pmf(const GwdParams& params, std::int64_t k);
double pmf(const GwdParams& params, std::int64_t k);

/// Pr(Y <= k); 0 for k < 0.  For a = 1 the closed-form survival is used
/// regardless of `method` unless Summation is requested explicitly.
double cdf(const GwdParams& params, std::int64_t k, CdfMethod method = CdfMethod::Quadrature);

/// Pr(Y <= k) by direct compensated summation of the pmf.
double cdf_summation(const GwdParams& params, std::int64_t k);

/// Pr(Y <= k) by integrating the negative-binomial CDF against the Beta mixing
/// density.  Absolute tolerance 1e-10; throws ConvergenceError otherwise.
double cdf_quadrature(const GwdParams& params, std::int64_t k);

/// Pr(Y >= k).  Exact (b)_k / (c-1)_k when a = 1.
double survival(const GwdParams& params, std::int64_t k);

/// Upper bound on Pr(Y > m) from the telescoping comparison sequence
/// w_j = Gamma(j+a)Gamma(j+b)/(Gamma(j+c-1)Gamma(j+1)).  +inf when the bound
/// does not apply yet at this m.
double tail_bound(const GwdParams& params, std::int64_t m);

/// Smallest m (searching by doubling) with tail_bound(m) <= eps.
std::int64_t truncation_point(const GwdParams& params, double eps);

/// Quantile by bracketing from the mode (never the mean, which may be infinite).
std::int64_t quantile(const GwdParams& params, double q, QuantileRule rule = QuantileRule::AtLeast);

/// E(Y) = ab/(c-a-b-1); infinite when c <= a+b+1.
Extended mean(const GwdParams& params);
/// ab(c-a-1)(c-b-1) / ((c-a-b-2)(c-a-b-1)^2); infinite when c <= a+b+2.
Extended variance(const GwdParams& params);
/// Pearson's beta_1 (squared-skewness form); undefined when c <= a+b+3.
Extended skewness_beta1(const GwdParams& params);

/// floor((a-1)(b-1)/(c-a-b+1)) clamped at 0.  When the ratio is an exact
/// positive integer m the pmf ties at m-1 and m; the lower index is returned.
std::int64_t mode(const GwdParams& params);

/// Law of Y - m given Y >= m for a simple Waring Y ~ GWD(1, b, c): GWD(1, b+m, c+m).
GwdParams shift_conditional(const GwdParams& params, std::int64_t m);

double nb_log_pmf(const NegBinParams& nb, std::int64_t k);
double nb_pmf(const NegBinParams& nb, std::int64_t k);

/// Draws p ~ Beta(c-a-b, b) then X ~ NB(a, p).
std::int64_t sample(const GwdParams& params, std::mt19937_64& rng);

}  // namespace gwd
}  // namespace waring
