#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "drgrade/tensor.hpp"

namespace drg {

// Adam with bias correction. Moments are keyed by parameter name; frozen
// parameters are skipped entirely.
class AdamState {
public:
    explicit AdamState(double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
        : beta1_(beta1), beta2_(beta2), eps_(eps) {}

    void step(const std::vector<Parameter*>& params, double lr);

    std::int64_t t() const { return t_; }
    double beta1() const { return beta1_; }
    double beta2() const { return beta2_; }
    double eps() const { return eps_; }

private:
    struct Moments {
        std::vector<double> m, v;
    };
    std::map<std::string, Moments> moments_;
    std::int64_t t_ = 0;
    double beta1_, beta2_, eps_;
};

}  // namespace drg
