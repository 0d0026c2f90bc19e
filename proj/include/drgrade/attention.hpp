#pragma once

#include <cstdint>
#include <vector>

#include "drgrade/tensor.hpp"

namespace drg {

// Global Attention Block: channel attention (GAP -> two 1x1 convs -> sigmoid,
// applied per channel) followed by parameter-free spatial attention (sigmoid
// of the cross-channel mean, applied per pixel).
struct GabState {
    Parameter conv_a_w, conv_a_b;  // c' -> c'/r
    Parameter conv_b_w, conv_b_b;  // c'/r -> c'
    int channels = 0;
    int reduction = 8;

    static GabState init(int channels, int reduction, std::uint64_t seed);
    std::vector<Parameter*> params();
};

// Category Attention Block: a 1x1 projection to k channels per class (plus
// training-time dropout), per-class score and spatial-map pooling, and a
// single averaged attention map multiplied back into the input.
struct CabState {
    Parameter conv_k_w, conv_k_b;  // c' -> k*L
    int channels = 0;
    int k = 5;
    int num_classes = 5;
    double dropout_rate = 0.5;
    bool sigmoid_map = false;  // squash the attention map before applying

    static CabState init(int channels, int k, int num_classes, double dropout_rate,
                         std::uint64_t seed);
    std::vector<Parameter*> params();
};

struct CabForwardArtifacts {
    TensorRef scores;         // (n, L, 1, 1) per-class scores
    TensorRef class_maps;     // (n, L, h, w)
    TensorRef attention_map;  // (n, 1, h, w)
};

TensorRef gab_channel_attention(Tape& tape, const TensorRef& f_in, GabState& state);
TensorRef gab_spatial_attention(Tape& tape, const TensorRef& f_ch);
TensorRef gab_forward(Tape& tape, const TensorRef& f_reduce, GabState& state);

TensorRef cab_project(Tape& tape, const TensorRef& f_in, CabState& state, bool training,
                      std::uint64_t seed);
TensorRef cab_scores(Tape& tape, const TensorRef& f_prime, int k, int num_classes);
TensorRef cab_class_maps(Tape& tape, const TensorRef& f_prime, int k, int num_classes);
TensorRef cab_attention_map(Tape& tape, const TensorRef& class_maps);

struct CabOutput {
    TensorRef out;
    CabForwardArtifacts artifacts;
};
CabOutput cab_forward(Tape& tape, const TensorRef& f_in, CabState& state, bool training,
                      std::uint64_t seed);

}  // namespace drg
