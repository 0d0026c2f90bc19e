#include "drgrade/ops.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "drgrade/kernels.hpp"

namespace drg::ops {

namespace {

std::string shape_str(const Shape& s) {
    return "(" + std::to_string(s.n) + "," + std::to_string(s.c) + "," +
           std::to_string(s.h) + "," + std::to_string(s.w) + ")";
}

void ensure_finite(const Tensor& t, const char* op) {
    for (double x : t.v) {
        if (!std::isfinite(x)) {
            throw ValidationError(std::string(op) + " produced a non-finite value");
        }
    }
}

}  // namespace

TensorRef conv1x1(Tape& tape, const TensorRef& input, const TensorRef& weight,
                  const TensorRef& bias) {
    const int c_in = input->shape.c;
    const int c_out = weight->shape.n;
    if (weight->shape.c != c_in || weight->shape.h != 1 || weight->shape.w != 1) {
        throw ShapeError("conv1x1: weight " + shape_str(weight->shape) +
                         " incompatible with input " + shape_str(input->shape));
    }
    if (bias->shape.c != c_out || bias->shape.size() != static_cast<std::size_t>(c_out)) {
        throw ShapeError("conv1x1: bias shape mismatch");
    }
    const std::size_t plane = input->shape.plane();
    auto out = make_tensor({input->shape.n, c_out, input->shape.h, input->shape.w});
    for (int n = 0; n < input->shape.n; ++n) {
        const double* in_base = input->data() + static_cast<std::size_t>(n) * c_in * plane;
        double* out_base = out->data() + static_cast<std::size_t>(n) * c_out * plane;
        for (int o = 0; o < c_out; ++o) {
            double* op_plane = out_base + o * plane;
            std::fill(op_plane, op_plane + plane, bias->v[o]);
            for (int i = 0; i < c_in; ++i) {
                kernels::axpy(weight->v[static_cast<std::size_t>(o) * c_in + i],
                              in_base + i * plane, op_plane, plane);
            }
        }
    }
    ensure_finite(*out, "conv1x1");
    tape.record(out, [input, weight, bias, out, c_in, c_out, plane] {
        auto& gi = input->grad();
        auto& gw = weight->grad();
        auto& gb = bias->grad();
        const auto& go = out->g;
        for (int n = 0; n < input->shape.n; ++n) {
            const double* in_base = input->data() + static_cast<std::size_t>(n) * c_in * plane;
            double* gi_base = gi.data() + static_cast<std::size_t>(n) * c_in * plane;
            const double* go_base = go.data() + static_cast<std::size_t>(n) * c_out * plane;
            for (int o = 0; o < c_out; ++o) {
                const double* go_plane = go_base + o * plane;
                gb[o] += kernels::sum(go_plane, plane);
                for (int i = 0; i < c_in; ++i) {
                    const double wv = weight->v[static_cast<std::size_t>(o) * c_in + i];
                    kernels::axpy(wv, go_plane, gi_base + i * plane, plane);
                    gw[static_cast<std::size_t>(o) * c_in + i] +=
                        kernels::dot(go_plane, in_base + i * plane, plane);
                }
            }
        }
    });
    return out;
}

TensorRef conv3x3(Tape& tape, const TensorRef& input, const TensorRef& weight,
                  const TensorRef& bias) {
    const int c_in = input->shape.c;
    const int c_out = weight->shape.n;
    const int h = input->shape.h, w = input->shape.w;
    if (weight->shape.c != c_in || weight->shape.h != 3 || weight->shape.w != 3) {
        throw ShapeError("conv3x3: weight " + shape_str(weight->shape) +
                         " incompatible with input " + shape_str(input->shape));
    }
    if (bias->shape.c != c_out || bias->shape.size() != static_cast<std::size_t>(c_out)) {
        throw ShapeError("conv3x3: bias shape mismatch");
    }
    const std::size_t plane = input->shape.plane();
    auto out = make_tensor({input->shape.n, c_out, h, w});
    for (int n = 0; n < input->shape.n; ++n) {
        const double* in_base = input->data() + static_cast<std::size_t>(n) * c_in * plane;
        double* out_base = out->data() + static_cast<std::size_t>(n) * c_out * plane;
        for (int o = 0; o < c_out; ++o) {
            double* op = out_base + o * plane;
            std::fill(op, op + plane, bias->v[o]);
            for (int i = 0; i < c_in; ++i) {
                const double* ip = in_base + i * plane;
                const double* wp = weight->data() +
                                   (static_cast<std::size_t>(o) * c_in + i) * 9;
                for (int ky = 0; ky < 3; ++ky) {
                    const int dy = ky - 1;
                    for (int kx = 0; kx < 3; ++kx) {
                        const int dx = kx - 1;
                        const double wv = wp[ky * 3 + kx];
                        const int x0 = std::max(0, -dx);
                        const int x1 = std::min(w, w - dx);
                        if (x1 <= x0) continue;
                        for (int y = std::max(0, -dy); y < std::min(h, h - dy); ++y) {
                            kernels::axpy(wv, ip + (y + dy) * w + x0 + dx,
                                          op + y * w + x0, x1 - x0);
                        }
                    }
                }
            }
        }
    }
    ensure_finite(*out, "conv3x3");
    tape.record(out, [input, weight, bias, out, c_in, c_out, h, w, plane] {
        auto& gi = input->grad();
        auto& gw = weight->grad();
        auto& gb = bias->grad();
        const auto& go = out->g;
        for (int n = 0; n < input->shape.n; ++n) {
            const double* in_base = input->data() + static_cast<std::size_t>(n) * c_in * plane;
            double* gi_base = gi.data() + static_cast<std::size_t>(n) * c_in * plane;
            const double* go_base = go.data() + static_cast<std::size_t>(n) * c_out * plane;
            for (int o = 0; o < c_out; ++o) {
                const double* gop = go_base + o * plane;
                gb[o] += kernels::sum(gop, plane);
                for (int i = 0; i < c_in; ++i) {
                    const double* ip = in_base + i * plane;
                    double* gip = gi_base + i * plane;
                    const double* wp = weight->data() +
                                       (static_cast<std::size_t>(o) * c_in + i) * 9;
                    double* gwp = gw.data() + (static_cast<std::size_t>(o) * c_in + i) * 9;
                    for (int ky = 0; ky < 3; ++ky) {
                        const int dy = ky - 1;
                        for (int kx = 0; kx < 3; ++kx) {
                            const int dx = kx - 1;
                            const double wv = wp[ky * 3 + kx];
                            const int x0 = std::max(0, -dx);
                            const int x1 = std::min(w, w - dx);
                            if (x1 <= x0) continue;
                            double acc = 0.0;
                            for (int y = std::max(0, -dy); y < std::min(h, h - dy); ++y) {
                                kernels::axpy(wv, gop + y * w + x0,
                                              gip + (y + dy) * w + x0 + dx, x1 - x0);
                                acc += kernels::dot(gop + y * w + x0,
                                                    ip + (y + dy) * w + x0 + dx, x1 - x0);
                            }
                            gwp[ky * 3 + kx] += acc;
                        }
                    }
                }
            }
        }
    });
    return out;
}

TensorRef avg_pool2x2(Tape& tape, const TensorRef& input) {
    const int h = input->shape.h, w = input->shape.w;
    if (h % 2 != 0 || w % 2 != 0) {
        throw ShapeError("avg_pool2x2: spatial dims must be even, got " +
                         shape_str(input->shape));
    }
    const int oh = h / 2, ow = w / 2;
    auto out = make_tensor({input->shape.n, input->shape.c, oh, ow});
    const int planes = input->shape.n * input->shape.c;
    for (int p = 0; p < planes; ++p) {
        const double* ip = input->data() + static_cast<std::size_t>(p) * h * w;
        double* op = out->data() + static_cast<std::size_t>(p) * oh * ow;
        for (int y = 0; y < oh; ++y) {
            for (int x = 0; x < ow; ++x) {
                const double* r0 = ip + (2 * y) * w + 2 * x;
                const double* r1 = r0 + w;
                op[y * ow + x] = 0.25 * (r0[0] + r0[1] + r1[0] + r1[1]);
            }
        }
    }
    tape.record(out, [input, out, h, w, oh, ow, planes] {
        auto& gi = input->grad();
        const auto& go = out->g;
        for (int p = 0; p < planes; ++p) {
            double* gip = gi.data() + static_cast<std::size_t>(p) * h * w;
            const double* gop = go.data() + static_cast<std::size_t>(p) * oh * ow;
            for (int y = 0; y < oh; ++y) {
                for (int x = 0; x < ow; ++x) {
                    const double gv = 0.25 * gop[y * ow + x];
                    gip[(2 * y) * w + 2 * x] += gv;
                    gip[(2 * y) * w + 2 * x + 1] += gv;
                    gip[(2 * y + 1) * w + 2 * x] += gv;
                    gip[(2 * y + 1) * w + 2 * x + 1] += gv;
                }
            }
        }
    });
    return out;
}

TensorRef global_avg_pool(Tape& tape, const TensorRef& input) {
    const std::size_t plane = input->shape.plane();
    auto out = make_tensor({input->shape.n, input->shape.c, 1, 1});
    const int planes = input->shape.n * input->shape.c;
    const double inv = 1.0 / static_cast<double>(plane);
    for (int p = 0; p < planes; ++p) {
        out->v[p] = inv * kernels::sum(input->data() + p * plane, plane);
    }
    ensure_finite(*out, "global_avg_pool");
    tape.record(out, [input, out, plane, planes, inv] {
        auto& gi = input->grad();
        const auto& go = out->g;
        for (int p = 0; p < planes; ++p) {
            const double gv = inv * go[p];
            double* gp = gi.data() + p * plane;
            for (std::size_t i = 0; i < plane; ++i) gp[i] += gv;
        }
    });
    return out;
}

TensorRef global_max_pool(Tape& tape, const TensorRef& input) {
    const std::size_t plane = input->shape.plane();
    const int planes = input->shape.n * input->shape.c;
    auto out = make_tensor({input->shape.n, input->shape.c, 1, 1});
    auto argmax = std::make_shared<std::vector<std::size_t>>(planes);
    for (int p = 0; p < planes; ++p) {
        const double* ip = input->data() + p * plane;
        const double m = kernels::max(ip, plane);
        std::size_t idx = 0;
        while (ip[idx] != m) ++idx;  // first occurrence, row-major
        out->v[p] = m;
        (*argmax)[p] = idx;
    }
    tape.record(out, [input, out, argmax, plane, planes] {
        auto& gi = input->grad();
        const auto& go = out->g;
        for (int p = 0; p < planes; ++p) {
            gi[p * plane + (*argmax)[p]] += go[p];
        }
    });
    return out;
}

TensorRef cross_channel_avg_pool(Tape& tape, const TensorRef& input) {
    const int c = input->shape.c;
    const std::size_t plane = input->shape.plane();
    auto out = make_tensor({input->shape.n, 1, input->shape.h, input->shape.w});
    const double inv = 1.0 / c;
    for (int n = 0; n < input->shape.n; ++n) {
        const double* in_base = input->data() + static_cast<std::size_t>(n) * c * plane;
        double* op = out->data() + static_cast<std::size_t>(n) * plane;
        std::fill(op, op + plane, 0.0);
        for (int i = 0; i < c; ++i) kernels::axpy(inv, in_base + i * plane, op, plane);
    }
    ensure_finite(*out, "cross_channel_avg_pool");
    tape.record(out, [input, out, c, plane, inv] {
        auto& gi = input->grad();
        const auto& go = out->g;
        for (int n = 0; n < input->shape.n; ++n) {
            double* gi_base = gi.data() + static_cast<std::size_t>(n) * c * plane;
            const double* gop = go.data() + static_cast<std::size_t>(n) * plane;
            for (int i = 0; i < c; ++i) kernels::axpy(inv, gop, gi_base + i * plane, plane);
        }
    });
    return out;
}

TensorRef channel_group_mean(Tape& tape, const TensorRef& input, int group) {
    const int c = input->shape.c;
    if (group < 1 || c % group != 0) {
        throw ConfigError("channel_group_mean: channel count " + std::to_string(c) +
                          " not divisible by group " + std::to_string(group));
    }
    const int m = c / group;
    const std::size_t plane = input->shape.plane();
    auto out = make_tensor({input->shape.n, m, input->shape.h, input->shape.w});
    const double inv = 1.0 / group;
    for (int n = 0; n < input->shape.n; ++n) {
        for (int j = 0; j < m; ++j) {
            double* op = out->data() + (static_cast<std::size_t>(n) * m + j) * plane;
            std::fill(op, op + plane, 0.0);
            for (int k = 0; k < group; ++k) {
                const double* ip = input->data() +
                                   (static_cast<std::size_t>(n) * c + j * group + k) * plane;
                kernels::axpy(inv, ip, op, plane);
            }
        }
    }
    ensure_finite(*out, "channel_group_mean");
    tape.record(out, [input, out, group, m, c, plane, inv] {
        auto& gi = input->grad();
        const auto& go = out->g;
        for (int n = 0; n < input->shape.n; ++n) {
            for (int j = 0; j < m; ++j) {
                const double* gop = go.data() + (static_cast<std::size_t>(n) * m + j) * plane;
                for (int k = 0; k < group; ++k) {
                    double* gip = gi.data() +
                                  (static_cast<std::size_t>(n) * c + j * group + k) * plane;
                    kernels::axpy(inv, gop, gip, plane);
                }
            }
        }
    });
    return out;
}

TensorRef sigmoid(Tape& tape, const TensorRef& input) {
    auto out = make_tensor(input->shape);
    const std::size_t n = input->v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double x = input->v[i];
        out->v[i] = x >= 0.0 ? 1.0 / (1.0 + std::exp(-x))
                             : std::exp(x) / (1.0 + std::exp(x));
    }
    tape.record(out, [input, out, n] {
        auto& gi = input->grad();
        const auto& go = out->g;
        for (std::size_t i = 0; i < n; ++i) {
            const double s = out->v[i];
            gi[i] += go[i] * s * (1.0 - s);
        }
    });
    return out;
}

TensorRef relu(Tape& tape, const TensorRef& input) {
    auto out = make_tensor(input->shape);
    const std::size_t n = input->v.size();
    kernels::relu(input->data(), out->data(), n);
    tape.record(out, [input, out, n] {
        auto& gi = input->grad();
        const auto& go = out->g;
        for (std::size_t i = 0; i < n; ++i) {
            if (input->v[i] > 0.0) gi[i] += go[i];
        }
    });
    return out;
}

TensorRef broadcast_mul(Tape& tape, const TensorRef& a, const TensorRef& b) {
    const Shape& sa = a->shape;
    const Shape& sb = b->shape;
    const std::size_t plane = sa.plane();
    auto out = make_tensor(sa);
    enum class Mode { full, channel, spatial };
    Mode mode;
    if (sb == sa) {
        mode = Mode::full;
    } else if (sb.n == sa.n && sb.c == sa.c && sb.h == 1 && sb.w == 1) {
        mode = Mode::channel;
    } else if (sb.n == sa.n && sb.c == 1 && sb.h == sa.h && sb.w == sa.w) {
        mode = Mode::spatial;
    } else {
        throw ShapeError("broadcast_mul: incompatible shapes " + shape_str(sa) + " vs " +
                         shape_str(sb));
    }
    switch (mode) {
        case Mode::full:
            kernels::mul(a->data(), b->data(), out->data(), sa.size());
            break;
        case Mode::channel:
            for (int n = 0; n < sa.n; ++n)
                for (int c = 0; c < sa.c; ++c) {
                    const std::size_t off = (static_cast<std::size_t>(n) * sa.c + c) * plane;
                    kernels::scale(a->data() + off,
                                   b->v[static_cast<std::size_t>(n) * sa.c + c],
                                   out->data() + off, plane);
                }
            break;
        case Mode::spatial:
            for (int n = 0; n < sa.n; ++n) {
                const double* bp = b->data() + static_cast<std::size_t>(n) * plane;
                for (int c = 0; c < sa.c; ++c) {
                    const std::size_t off = (static_cast<std::size_t>(n) * sa.c + c) * plane;
                    kernels::mul(a->data() + off, bp, out->data() + off, plane);
                }
            }
            break;
    }
    ensure_finite(*out, "broadcast_mul");
    tape.record(out, [a, b, out, mode, plane] {
        const Shape& sa = a->shape;
        auto& ga = a->grad();
        auto& gb = b->grad();
        const auto& go = out->g;
        switch (mode) {
            case Mode::full:
                for (std::size_t i = 0; i < go.size(); ++i) {
                    ga[i] += go[i] * b->v[i];
                    gb[i] += go[i] * a->v[i];
                }
                break;
            case Mode::channel:
                for (int n = 0; n < sa.n; ++n)
                    for (int c = 0; c < sa.c; ++c) {
                        const std::size_t bi = static_cast<std::size_t>(n) * sa.c + c;
                        const std::size_t off = bi * plane;
                        kernels::axpy(b->v[bi], go.data() + off, ga.data() + off, plane);
                        gb[bi] += kernels::dot(go.data() + off, a->data() + off, plane);
                    }
                break;
            case Mode::spatial:
                for (int n = 0; n < sa.n; ++n) {
                    const double* bp = b->data() + static_cast<std::size_t>(n) * plane;
                    double* gbp = gb.data() + static_cast<std::size_t>(n) * plane;
                    for (int c = 0; c < sa.c; ++c) {
                        const std::size_t off = (static_cast<std::size_t>(n) * sa.c + c) * plane;
                        for (std::size_t i = 0; i < plane; ++i) {
                            ga[off + i] += go[off + i] * bp[i];
                            gbp[i] += go[off + i] * a->v[off + i];
                        }
                    }
                }
                break;
        }
    });
    return out;
}

TensorRef add(Tape& tape, const TensorRef& a, const TensorRef& b) {
    if (!(a->shape == b->shape)) throw ShapeError("add: shape mismatch");
    auto out = make_tensor(a->shape);
    for (std::size_t i = 0; i < out->v.size(); ++i) out->v[i] = a->v[i] + b->v[i];
    tape.record(out, [a, b, out] {
        auto& ga = a->grad();
        auto& gb = b->grad();
        kernels::axpy(1.0, out->g.data(), ga.data(), ga.size());
        kernels::axpy(1.0, out->g.data(), gb.data(), gb.size());
    });
    return out;
}

TensorRef scalar_mul(Tape& tape, const TensorRef& a, double s) {
    auto out = make_tensor(a->shape);
    kernels::scale(a->data(), s, out->data(), a->v.size());
    tape.record(out, [a, out, s] {
        auto& ga = a->grad();
        kernels::axpy(s, out->g.data(), ga.data(), ga.size());
    });
    return out;
}

TensorRef dropout(Tape& tape, const TensorRef& input, double rate, bool training,
                  std::uint64_t seed) {
    if (rate < 0.0 || rate >= 1.0) throw ValidationError("dropout rate must be in [0,1)");
    if (!training || rate == 0.0) {
        auto out = make_tensor(input->shape, input->v);
        tape.record(out, [input, out] {
            auto& gi = input->grad();
            kernels::axpy(1.0, out->g.data(), gi.data(), gi.size());
        });
        return out;
    }
    const std::size_t n = input->v.size();
    auto mask = std::make_shared<std::vector<double>>(n);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double keep_scale = 1.0 / (1.0 - rate);
    for (std::size_t i = 0; i < n; ++i) {
        (*mask)[i] = uni(rng) < rate ? 0.0 : keep_scale;
    }
    auto out = make_tensor(input->shape);
    kernels::mul(input->data(), mask->data(), out->data(), n);
    tape.record(out, [input, out, mask, n] {
        auto& gi = input->grad();
        const auto& go = out->g;
        for (std::size_t i = 0; i < n; ++i) gi[i] += go[i] * (*mask)[i];
    });
    return out;
}

TensorRef fully_connected(Tape& tape, const TensorRef& input, const TensorRef& weight,
                          const TensorRef& bias) {
    const int n = input->shape.n;
    const std::size_t d = input->v.size() / n;
    const int L = weight->shape.n;
    if (static_cast<std::size_t>(weight->shape.c) * weight->shape.h * weight->shape.w != d) {
        throw ShapeError("fully_connected: weight columns do not match flattened input");
    }
    if (bias->shape.size() != static_cast<std::size_t>(L)) {
        throw ShapeError("fully_connected: bias size mismatch");
    }
    auto out = make_tensor({n, L, 1, 1});
    for (int r = 0; r < n; ++r) {
        const double* xr = input->data() + r * d;
        for (int l = 0; l < L; ++l) {
            out->v[static_cast<std::size_t>(r) * L + l] =
                bias->v[l] + kernels::dot(xr, weight->data() + l * d, d);
        }
    }
    ensure_finite(*out, "fully_connected");
    tape.record(out, [input, weight, bias, out, n, d, L] {
        auto& gi = input->grad();
        auto& gw = weight->grad();
        auto& gb = bias->grad();
        const auto& go = out->g;
        for (int r = 0; r < n; ++r) {
            const double* xr = input->data() + r * d;
            double* gxr = gi.data() + r * d;
            for (int l = 0; l < L; ++l) {
                const double gv = go[static_cast<std::size_t>(r) * L + l];
                if (gv == 0.0) continue;
                gb[l] += gv;
                kernels::axpy(gv, weight->data() + l * d, gxr, d);
                kernels::axpy(gv, xr, gw.data() + l * d, d);
            }
        }
    });
    return out;
}

TensorRef softmax_cross_entropy(Tape& tape, const TensorRef& logits,
                                const std::vector<int>& labels) {
    const int n = logits->shape.n;
    const int L = logits->shape.c;
    if (logits->shape.h != 1 || logits->shape.w != 1) {
        throw ShapeError("softmax_cross_entropy: logits must be (n,L,1,1)");
    }
    if (static_cast<int>(labels.size()) != n) {
        throw ValidationError("softmax_cross_entropy: label count mismatch");
    }
    for (int lab : labels) {
        if (lab < 0 || lab >= L) {
            throw ValidationError("softmax_cross_entropy: label " + std::to_string(lab) +
                                  " out of range [0," + std::to_string(L) + ")");
        }
    }
    auto probs = std::make_shared<std::vector<double>>(softmax_rows(*logits));
    double loss = 0.0;
    for (int r = 0; r < n; ++r) {
        loss -= std::log((*probs)[static_cast<std::size_t>(r) * L + labels[r]]);
    }
    auto out = make_tensor({1, 1, 1, 1});
    out->v[0] = loss / n;
    ensure_finite(*out, "softmax_cross_entropy");
    auto labels_copy = std::make_shared<std::vector<int>>(labels);
    tape.record(out, [logits, out, probs, labels_copy, n, L] {
        auto& gl = logits->grad();
        const double g0 = out->g[0] / n;
        for (int r = 0; r < n; ++r) {
            for (int l = 0; l < L; ++l) {
                const std::size_t i = static_cast<std::size_t>(r) * L + l;
                gl[i] += g0 * ((*probs)[i] - ((*labels_copy)[r] == l ? 1.0 : 0.0));
            }
        }
    });
    return out;
}

TensorRef select_logit(Tape& tape, const TensorRef& logits, int row, int cls) {
    if (row < 0 || row >= logits->shape.n || cls < 0 || cls >= logits->shape.c) {
        throw ValidationError("select_logit: index out of range");
    }
    const std::size_t idx = static_cast<std::size_t>(row) * logits->shape.c + cls;
    auto out = make_tensor({1, 1, 1, 1});
    out->v[0] = logits->v[idx];
    tape.record(out, [logits, out, idx] {
        logits->grad()[idx] += out->g[0];
    });
    return out;
}

std::vector<double> softmax_rows(const Tensor& logits) {
    const int n = logits.shape.n;
    const int L = logits.shape.c;
    std::vector<double> probs(static_cast<std::size_t>(n) * L);
    for (int r = 0; r < n; ++r) {
        const double* row = logits.data() + static_cast<std::size_t>(r) * L;
        const double m = kernels::max(row, L);
        double z = 0.0;
        for (int l = 0; l < L; ++l) {
            probs[static_cast<std::size_t>(r) * L + l] = std::exp(row[l] - m);
            z += probs[static_cast<std::size_t>(r) * L + l];
        }
        for (int l = 0; l < L; ++l) probs[static_cast<std::size_t>(r) * L + l] /= z;
    }
    return probs;
}

std::vector<int> argmax_rows(const Tensor& logits) {
    const int n = logits.shape.n;
    const int L = logits.shape.c;
    std::vector<int> out(n);
    for (int r = 0; r < n; ++r) {
        const double* row = logits.data() + static_cast<std::size_t>(r) * L;
        int best = 0;
        for (int l = 1; l < L; ++l) {
            if (row[l] > row[best]) best = l;
        }
        out[r] = best;
    }
    return out;
}

}  // namespace drg::ops
