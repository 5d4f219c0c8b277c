#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "voxsplat/tape.hpp"

namespace voxsplat {

struct GradCheckEntry {
    std::string name;
    double max_rel_err = 0.0;
    bool pass = true;
};

struct GradCheckReport {
    std::vector<GradCheckEntry> entries;
    double eps = 0.0;
    double tol = 0.0;

    bool all_pass() const {
        for (const auto& e : entries)
            if (!e.pass) return false;
        return true;
    }

    double worst() const {
        double w = 0.0;
        for (const auto& e : entries) w = std::max(w, e.max_rel_err);
        return w;
    }

    void print(std::FILE* out = stdout) const {
        for (const auto& e : entries)
            std::fprintf(out, "  %-40s max rel err %.3e  %s\n", e.name.c_str(), e.max_rel_err,
                         e.pass ? "ok" : "FAIL");
    }
};

// guarded relative error; denominators below the FD noise floor are clamped
inline double rel_err(double a, double b) {
    double d = std::fabs(a - b);
    double m = std::max({std::fabs(a), std::fabs(b), 1e-6});
    return d / m;
}

// Central-difference oracle for any scalar function of a parameter set.
// `f(with_grad)` must rebuild its forward pass from scratch each call and,
// when with_grad is set, run backward so analytic gradients land in the
// parameters. It must be deterministic under its own frozen RNG state.
inline GradCheckReport finite_diff_check(const std::function<double(bool)>& f,
                                         const std::vector<Parameter*>& params, double eps,
                                         double tol) {
    GradCheckReport report;
    report.eps = eps;
    report.tol = tol;

    double probe1 = f(false);
    double probe2 = f(false);
    if (!(probe1 == probe2))
        throw std::runtime_error("finite_diff_check: f is non-deterministic under fixed RNG");

    for (Parameter* p : params) p->zero_grad();
    f(true);
    std::vector<Tensor> analytic;
    analytic.reserve(params.size());
    for (Parameter* p : params) analytic.push_back(p->grad);

    for (std::size_t pi = 0; pi < params.size(); ++pi) {
        Parameter* p = params[pi];
        GradCheckEntry entry;
        entry.name = p->name;
        for (std::size_t i = 0; i < p->value.size(); ++i) {
            double keep = p->value.data[i];
            p->value.data[i] = keep + eps;
            double fp = f(false);
            p->value.data[i] = keep - eps;
            double fm = f(false);
            p->value.data[i] = keep;
            double fd = (fp - fm) / (2.0 * eps);
            entry.max_rel_err = std::max(entry.max_rel_err, rel_err(analytic[pi].data[i], fd));
        }
        entry.pass = entry.max_rel_err <= tol;
        report.entries.push_back(std::move(entry));
    }
    return report;
}

}  // namespace voxsplat
