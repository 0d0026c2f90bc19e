#include "drgrade/adam.hpp"

#include <cmath>

namespace drg {

void AdamState::step(const std::vector<Parameter*>& params, double lr) {
    if (lr < 0.0) throw ValidationError("adam: lr must be >= 0");
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (auto* pp : params) {
        auto& p = *pp;
        if (!p.trainable) continue;
        auto& t = *p.tensor;
        auto& mom = moments_[p.name];
        if (mom.m.empty()) {
            mom.m.assign(t.v.size(), 0.0);
            mom.v.assign(t.v.size(), 0.0);
        }
        const bool has_grad = t.has_grad();
        for (std::size_t i = 0; i < t.v.size(); ++i) {
            const double g = has_grad ? t.g[i] : 0.0;
            mom.m[i] = beta1_ * mom.m[i] + (1.0 - beta1_) * g;
            mom.v[i] = beta2_ * mom.v[i] + (1.0 - beta2_) * g * g;
            const double mhat = mom.m[i] / bc1;
            const double vhat = mom.v[i] / bc2;
            t.v[i] -= lr * mhat / (std::sqrt(vhat) + eps_);
        }
    }
}

}  // namespace drg
