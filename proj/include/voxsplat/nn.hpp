#pragma once

#include <string>
#include <vector>

#include "voxsplat/ops.hpp"
#include "voxsplat/rng.hpp"
#include "voxsplat/tape.hpp"

namespace voxsplat {

// uniform(-a, a) with a = sqrt(6 / (fan_in + fan_out)); biases start at zero
inline Parameter make_linear_weight(const std::string& name, std::size_t cin, std::size_t cout,
                                    RngStream& rng) {
    double a = std::sqrt(6.0 / double(cin + cout));
    Tensor W({cin, cout});
    for (double& v : W.data) v = rng.uniform(-a, a);
    return Parameter(name, std::move(W));
}

inline Parameter make_bias(const std::string& name, std::size_t cout) {
    return Parameter(name, Tensor({cout}));
}

struct MlpLayer {
    Parameter W;
    Parameter b;
    ops::Activation act = ops::Activation::Relu;
};

// Stack of linear layers. The last layer always emits raw logits; its
// activation field is ignored.
struct Mlp {
    std::vector<MlpLayer> layers;

    static Mlp make(const std::string& name, const std::vector<std::size_t>& widths,
                    ops::Activation act, RngStream& rng) {
        if (widths.size() < 2) throw std::invalid_argument("mlp: need at least one layer");
        Mlp m;
        for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
            MlpLayer l;
            l.W = make_linear_weight(name + ".W" + std::to_string(i), widths[i], widths[i + 1], rng);
            l.b = make_bias(name + ".b" + std::to_string(i), widths[i + 1]);
            l.act = act;
            m.layers.push_back(std::move(l));
        }
        return m;
    }

    Var forward(Tape& t, Var x) {
        for (std::size_t i = 0; i < layers.size(); ++i) {
            x = ops::linear(x, watch(t, layers[i].W), watch(t, layers[i].b));
            if (i + 1 < layers.size()) x = ops::activate(x, layers[i].act);
        }
        return x;
    }

    std::vector<Parameter*> params() {
        std::vector<Parameter*> ps;
        for (auto& l : layers) {
            ps.push_back(&l.W);
            ps.push_back(&l.b);
        }
        return ps;
    }
};

}  // namespace voxsplat
