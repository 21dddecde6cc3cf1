#pragma once

#include "waring/gwd.hpp"

#include <cmath>
#include <cstdint>

namespace waring::gwd::detail {

/// Neumaier-compensated running sum.
class NeumaierSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Walks pmf(k), pmf(k+1), ... by the ratio (a+k)(b+k)/((c+k)(k+1)),
/// re-anchoring in log space every kResync steps to bound drift.
class PmfWalker {
public:
    PmfWalker(const GwdParams& params, std::int64_t start)
        : params_(params), k_(start), pmf_(gwd::pmf(params, start)) {}

    std::int64_t k() const { return k_; }
    double pmf() const { return pmf_; }

    void step() {
        const double kd = static_cast<double>(k_);
        pmf_ *= (params_.a + kd) * (params_.b + kd) / ((params_.c + kd) * (kd + 1.0));
        ++k_;
        if (++since_anchor_ == kResync) {
            pmf_ = gwd::pmf(params_, k_);
            since_anchor_ = 0;
        }
    }

private:
    static constexpr int kResync = 128;
    GwdParams params_;
    std::int64_t k_;
    double pmf_;
    int since_anchor_ = 0;
};

}  // namespace waring::gwd::detail
