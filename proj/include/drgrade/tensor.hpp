#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace drg {

struct ShapeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dense rank-4 (n, c, h, w) shape, row-major.
struct Shape {
    int n = 1, c = 1, h = 1, w = 1;

    Shape() = default;
    Shape(int n_, int c_, int h_, int w_) : n(n_), c(c_), h(h_), w(w_) {
        if (n < 1 || c < 1 || h < 1 || w < 1) {
            throw ShapeError("shape dims must be >= 1");
        }
    }

    std::size_t size() const {
        return static_cast<std::size_t>(n) * c * h * w;
    }
    std::size_t plane() const { return static_cast<std::size_t>(h) * w; }

    bool operator==(const Shape&) const = default;
};

// Tensor node. Values are flat row-major; grad is allocated lazily during
// backward and stays empty for tensors the loss never reaches.
struct Tensor {
    Shape shape;
    std::vector<double> v;
    std::vector<double> g;
    bool requires_grad = false;

    Tensor() = default;
    explicit Tensor(Shape s, double fill = 0.0)
        : shape(s), v(s.size(), fill) {}
    Tensor(Shape s, std::vector<double> values) : shape(s), v(std::move(values)) {
        if (v.size() != shape.size()) throw ShapeError("value count does not match shape");
    }

    double* data() { return v.data(); }
    const double* data() const { return v.data(); }
    double& at(int n_, int c_, int y, int x) {
        return v[((static_cast<std::size_t>(n_) * shape.c + c_) * shape.h + y) * shape.w + x];
    }
    double at(int n_, int c_, int y, int x) const {
        return v[((static_cast<std::size_t>(n_) * shape.c + c_) * shape.h + y) * shape.w + x];
    }

    // Accumulates into grad, allocating it on first touch.
    std::vector<double>& grad() {
        if (g.empty()) g.assign(v.size(), 0.0);
        return g;
    }
    bool has_grad() const { return !g.empty(); }
    void zero_grad() { g.clear(); }
};

using TensorRef = std::shared_ptr<Tensor>;

inline TensorRef make_tensor(Shape s, double fill = 0.0) {
    return std::make_shared<Tensor>(s, fill);
}
inline TensorRef make_tensor(Shape s, std::vector<double> values) {
    return std::make_shared<Tensor>(s, std::move(values));
}

// Named learnable tensor. Frozen parameters keep requires_grad so gradient
// checks can still reach them; the optimizer skips them.
struct Parameter {
    std::string name;
    TensorRef tensor;
    bool trainable = true;

    Parameter() = default;
    Parameter(std::string name_, TensorRef t, bool trainable_ = true)
        : name(std::move(name_)), tensor(std::move(t)), trainable(trainable_) {
        tensor->requires_grad = true;
    }
};

// Ordered record of a forward pass. Replaying in reverse populates grads for
// every tensor reachable from the scalar loss.
class Tape {
public:
    void record(TensorRef out, std::function<void()> backward_fn) {
        entries_.push_back({std::move(out), std::move(backward_fn)});
    }

    // Seeds d(loss)/d(loss) = 1 and runs the recorded ops in reverse. Entries
    // whose output was never reached (no grad) are skipped.
    void backward(const TensorRef& loss) {
        if (loss->shape.size() != 1) {
            throw ValidationError("backward requires a scalar loss");
        }
        loss->grad()[0] += 1.0;
        for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
            if (it->out->has_grad()) it->fn();
        }
    }

    void clear() { entries_.clear(); }
    std::size_t size() const { return entries_.size(); }

private:
    struct Entry {
        TensorRef out;
        std::function<void()> fn;
    };
    std::vector<Entry> entries_;
};

}  // namespace drg
