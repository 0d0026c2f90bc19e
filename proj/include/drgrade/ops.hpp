#pragma once

#include <cstdint>
#include <vector>

#include "drgrade/tensor.hpp"

// Differentiable tensor operations. Each op validates shapes, computes the
// forward result, and records its backward closure on the tape.
namespace drg::ops {

// weight (c_out, c_in, 1, 1), bias (1, c_out, 1, 1)
TensorRef conv1x1(Tape& tape, const TensorRef& input, const TensorRef& weight,
                  const TensorRef& bias);

// weight (c_out, c_in, 3, 3), bias (1, c_out, 1, 1); stride 1, zero padding 1
TensorRef conv3x3(Tape& tape, const TensorRef& input, const TensorRef& weight,
                  const TensorRef& bias);

// 2x2 average pool, stride 2; h and w must be even
TensorRef avg_pool2x2(Tape& tape, const TensorRef& input);

// (n,c,h,w) -> (n,c,1,1), per-channel spatial mean
TensorRef global_avg_pool(Tape& tape, const TensorRef& input);

// (n,c,h,w) -> (n,c,1,1), per-channel spatial max; gradient routes to the
// first (row-major) maximal element
TensorRef global_max_pool(Tape& tape, const TensorRef& input);

// (n,c,h,w) -> (n,1,h,w), per-pixel channel mean
TensorRef cross_channel_avg_pool(Tape& tape, const TensorRef& input);

// (n, g*m, h, w) -> (n, m, h, w): mean over each run of `group` consecutive
// channels. group == c reduces to cross_channel_avg_pool.
TensorRef channel_group_mean(Tape& tape, const TensorRef& input, int group);

TensorRef sigmoid(Tape& tape, const TensorRef& input);
TensorRef relu(Tape& tape, const TensorRef& input);

// Elementwise product. b may equal a's shape, or broadcast from (n,c,1,1)
// (per-channel map) or (n,1,h,w) (per-pixel map).
TensorRef broadcast_mul(Tape& tape, const TensorRef& a, const TensorRef& b);

TensorRef add(Tape& tape, const TensorRef& a, const TensorRef& b);
TensorRef scalar_mul(Tape& tape, const TensorRef& a, double s);

// Inverted dropout: training zeroes elements with probability `rate` and
// scales survivors by 1/(1-rate); inference is a bit-exact identity.
TensorRef dropout(Tape& tape, const TensorRef& input, double rate, bool training,
                  std::uint64_t seed);

// input flattened to n x d; weight (L, d, 1, 1), bias (1, L, 1, 1) -> (n, L, 1, 1)
TensorRef fully_connected(Tape& tape, const TensorRef& input, const TensorRef& weight,
                          const TensorRef& bias);

// Mean over the batch of -log softmax(logits)[label]; numerically stabilized
// by max subtraction. Returns a scalar (1,1,1,1).
TensorRef softmax_cross_entropy(Tape& tape, const TensorRef& logits,
                                const std::vector<int>& labels);

// Picks logits[row, cls] as a differentiable scalar.
TensorRef select_logit(Tape& tape, const TensorRef& logits, int row, int cls);

// Row-wise softmax probabilities of (n,L,1,1) logits (no tape, inference use).
std::vector<double> softmax_rows(const Tensor& logits);

// argmax per row with lowest-index tie-break
std::vector<int> argmax_rows(const Tensor& logits);

}  // namespace drg::ops
