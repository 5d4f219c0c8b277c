#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "voxsplat/tape.hpp"

namespace voxsplat {

struct AdamWState {
    Tensor m;
    Tensor v;
    long step = 0;
    double lr0 = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.01;

    static AdamWState for_param(const Parameter& p, double lr0 = 1e-4, double wd = 0.01) {
        AdamWState s;
        s.m = Tensor::zeros_like(p.value);
        s.v = Tensor::zeros_like(p.value);
        s.lr0 = lr0;
        s.weight_decay = wd;
        return s;
    }
};

// Decoupled weight decay first, then the Adam update with bias correction.
// The gradient is left in place; the caller zeroes it.
inline void adamw_step(Parameter& p, AdamWState& s, double lr) {
    if (!p.grad.all_finite())
        throw std::runtime_error("adamw_step: non-finite gradient in parameter '" + p.name + "'");
    long t = s.step + 1;
    double bc1 = 1.0 - std::pow(s.beta1, double(t));
    double bc2 = 1.0 - std::pow(s.beta2, double(t));
    for (std::size_t i = 0; i < p.value.size(); ++i) {
        p.value.data[i] -= lr * s.weight_decay * p.value.data[i];
        double g = p.grad.data[i];
        s.m.data[i] = s.beta1 * s.m.data[i] + (1.0 - s.beta1) * g;
        s.v.data[i] = s.beta2 * s.v.data[i] + (1.0 - s.beta2) * g * g;
        double mhat = s.m.data[i] / bc1;
        double vhat = s.v.data[i] / bc2;
        p.value.data[i] -= lr * mhat / (std::sqrt(vhat) + s.eps);
    }
    s.step = t;
}

// lr0 * 0.5 * (1 + cos(pi * step / total))
inline double cosine_lr(long step, long total_steps, double lr0) {
    if (total_steps < 1) throw std::invalid_argument("cosine_lr: total_steps must be >= 1");
    if (step < 0 || step > total_steps) throw std::invalid_argument("cosine_lr: step out of range");
    return lr0 * 0.5 * (1.0 + std::cos(3.14159265358979323846 * double(step) / double(total_steps)));
}

}  // namespace voxsplat
