#include "drgrade/attention.hpp"

#include "drgrade/init.hpp"
#include "drgrade/ops.hpp"
#include "drgrade/rng.hpp"

namespace drg {

GabState GabState::init(int channels, int reduction, std::uint64_t seed) {
    if (reduction < 1 || channels % reduction != 0) {
        throw ConfigError("gab: channels " + std::to_string(channels) +
                          " not divisible by reduction " + std::to_string(reduction));
    }
    const int mid = channels / reduction;
    GabState s;
    s.channels = channels;
    s.reduction = reduction;
    s.conv_a_w = Parameter("gab.conv_a.weight",
                           he_normal({mid, channels, 1, 1}, channels,
                                     derive_seed(seed, "gab.conv_a")));
    s.conv_a_b = Parameter("gab.conv_a.bias", make_tensor({1, mid, 1, 1}));
    s.conv_b_w = Parameter("gab.conv_b.weight",
                           he_normal({channels, mid, 1, 1}, mid,
                                     derive_seed(seed, "gab.conv_b")));
    s.conv_b_b = Parameter("gab.conv_b.bias", make_tensor({1, channels, 1, 1}));
    return s;
}

std::vector<Parameter*> GabState::params() {
    return {&conv_a_w, &conv_a_b, &conv_b_w, &conv_b_b};
}

CabState CabState::init(int channels, int k, int num_classes, double dropout_rate,
                        std::uint64_t seed) {
    if (k < 1 || num_classes < 1) throw ConfigError("cab: k and class count must be >= 1");
    CabState s;
    s.channels = channels;
    s.k = k;
    s.num_classes = num_classes;
    s.dropout_rate = dropout_rate;
    s.conv_k_w = Parameter("cab.conv_k.weight",
                           he_normal({k * num_classes, channels, 1, 1}, channels,
                                     derive_seed(seed, "cab.conv_k")));
    s.conv_k_b = Parameter("cab.conv_k.bias", make_tensor({1, k * num_classes, 1, 1}));
    return s;
}

std::vector<Parameter*> CabState::params() { return {&conv_k_w, &conv_k_b}; }

TensorRef gab_channel_attention(Tape& tape, const TensorRef& f_in, GabState& state) {
    if (f_in->shape.c != state.channels) {
        throw ShapeError("gab: input has " + std::to_string(f_in->shape.c) +
                         " channels, state expects " + std::to_string(state.channels));
    }
    auto pooled = ops::global_avg_pool(tape, f_in);
    auto a = ops::relu(tape, ops::conv1x1(tape, pooled, state.conv_a_w.tensor,
                                          state.conv_a_b.tensor));
    auto weights = ops::sigmoid(
        tape, ops::conv1x1(tape, a, state.conv_b_w.tensor, state.conv_b_b.tensor));
    return ops::broadcast_mul(tape, f_in, weights);
}

TensorRef gab_spatial_attention(Tape& tape, const TensorRef& f_ch) {
    auto map = ops::sigmoid(tape, ops::cross_channel_avg_pool(tape, f_ch));
    return ops::broadcast_mul(tape, f_ch, map);
}

TensorRef gab_forward(Tape& tape, const TensorRef& f_reduce, GabState& state) {
    return gab_spatial_attention(tape, gab_channel_attention(tape, f_reduce, state));
}

TensorRef cab_project(Tape& tape, const TensorRef& f_in, CabState& state, bool training,
                      std::uint64_t seed) {
    auto projected = ops::conv1x1(tape, f_in, state.conv_k_w.tensor, state.conv_k_b.tensor);
    return ops::dropout(tape, projected, state.dropout_rate, training, seed);
}

TensorRef cab_scores(Tape& tape, const TensorRef& f_prime, int k, int num_classes) {
    if (f_prime->shape.c != k * num_classes) {
        throw ConfigError("cab_scores: channel count " + std::to_string(f_prime->shape.c) +
                          " != k*L = " + std::to_string(k * num_classes));
    }
    return ops::channel_group_mean(tape, ops::global_max_pool(tape, f_prime), k);
}

TensorRef cab_class_maps(Tape& tape, const TensorRef& f_prime, int k, int num_classes) {
    if (f_prime->shape.c != k * num_classes) {
        throw ConfigError("cab_class_maps: channel count " +
                          std::to_string(f_prime->shape.c) +
                          " != k*L = " + std::to_string(k * num_classes));
    }
    return ops::channel_group_mean(tape, f_prime, k);
}

TensorRef cab_attention_map(Tape& tape, const TensorRef& class_maps) {
    return ops::channel_group_mean(tape, class_maps, class_maps->shape.c);
}

CabOutput cab_forward(Tape& tape, const TensorRef& f_in, CabState& state, bool training,
                      std::uint64_t seed) {
    auto f_prime = cab_project(tape, f_in, state, training, seed);
    CabForwardArtifacts art;
    art.scores = cab_scores(tape, f_prime, state.k, state.num_classes);
    art.class_maps = cab_class_maps(tape, f_prime, state.k, state.num_classes);
    art.attention_map = cab_attention_map(tape, art.class_maps);
    auto map = state.sigmoid_map ? ops::sigmoid(tape, art.attention_map)
                                 : art.attention_map;
    return {ops::broadcast_mul(tape, f_in, map), std::move(art)};
}

}  // namespace drg
