#include "drgrade/explain.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "drgrade/ops.hpp"

namespace fs = std::filesystem;

namespace drg {

std::string to_string(Stage s) {
    switch (s) {
        case Stage::pre_attention: return "noattn";
        case Stage::gab: return "gab";
        case Stage::cab: return "cab";
    }
    return "?";
}

Stage stage_from_string(const std::string& s) {
    if (s == "noattn" || s == "pre_attention") return Stage::pre_attention;
    if (s == "gab") return Stage::gab;
    if (s == "cab") return Stage::cab;
    throw ValidationError("unknown stage: " + s);
}

Heatmap grad_cam(ModelAssembly& m, const TensorRef& image, int target_grade, Stage stage) {
    if (target_grade < 0 || target_grade >= m.config.num_classes) {
        throw ValidationError("grad_cam: target grade out of range");
    }
    if (stage == Stage::gab && !m.uses_gab()) {
        throw ConfigError("grad_cam: model has no GAB stage");
    }
    if (stage == Stage::cab && !m.uses_cab()) {
        throw ConfigError("grad_cam: model has no CAB stage");
    }
    Tape tape;
    m.zero_grads();
    auto fwd = model_forward(tape, image, m, /*training=*/false, /*seed=*/0);
    TensorRef act;
    switch (stage) {
        case Stage::pre_attention: act = fwd.f_reduce; break;
        case Stage::gab: act = fwd.gab_out; break;
        case Stage::cab: act = fwd.cab_out; break;
    }
    auto target = ops::select_logit(tape, fwd.logits, 0, target_grade);
    tape.backward(target);

    Heatmap hm;
    hm.h = act->shape.h;
    hm.w = act->shape.w;
    hm.stage = stage;
    hm.target_grade = target_grade;
    hm.values.assign(static_cast<std::size_t>(hm.h) * hm.w, 0.0);
    const std::size_t plane = act->shape.plane();
    if (act->has_grad()) {
        for (int c = 0; c < act->shape.c; ++c) {
            const double* gp = act->g.data() + c * plane;
            double wgt = 0.0;
            for (std::size_t i = 0; i < plane; ++i) wgt += gp[i];
            wgt /= static_cast<double>(plane);
            const double* ap = act->data() + c * plane;
            for (std::size_t i = 0; i < plane; ++i) hm.values[i] += wgt * ap[i];
        }
    }
    for (auto& v : hm.values) v = std::max(0.0, v);
    const double lo = *std::min_element(hm.values.begin(), hm.values.end());
    const double hi = *std::max_element(hm.values.begin(), hm.values.end());
    if (hi - lo <= 0.0) {
        std::fill(hm.values.begin(), hm.values.end(), 0.0);
        hm.flat = true;
    } else {
        for (auto& v : hm.values) v = (v - lo) / (hi - lo);
    }
    return hm;
}

namespace {

// compact viridis approximation, linearly interpolated
constexpr double kViridis[9][3] = {
    {0.267, 0.005, 0.329}, {0.283, 0.141, 0.458}, {0.254, 0.265, 0.530},
    {0.207, 0.372, 0.553}, {0.164, 0.471, 0.558}, {0.128, 0.567, 0.551},
    {0.135, 0.659, 0.518}, {0.267, 0.749, 0.441}, {0.993, 0.906, 0.144}};

void colormap(double t, double rgb[3]) {
    t = std::clamp(t, 0.0, 1.0) * 8.0;
    const int i = std::min(7, static_cast<int>(t));
    const double f = t - i;
    for (int c = 0; c < 3; ++c) {
        rgb[c] = (1.0 - f) * kViridis[i][c] + f * kViridis[i + 1][c];
    }
}

double sample_bilinear(const Heatmap& hm, double fy, double fx) {
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, hm.h - 1);
    const int x0 = static_cast<int>(fx);
    const int x1 = std::min(x0 + 1, hm.w - 1);
    const double wy = fy - y0, wx = fx - x0;
    const auto v = [&](int y, int x) { return hm.values[static_cast<std::size_t>(y) * hm.w + x]; };
    return (1.0 - wy) * ((1.0 - wx) * v(y0, x0) + wx * v(y0, x1)) +
           wy * ((1.0 - wx) * v(y1, x0) + wx * v(y1, x1));
}

}  // namespace

Image render_overlay(const Heatmap& hm, const Image& image, double alpha) {
    Image out(image.h, image.w);
    const double sy = image.h > 1 ? static_cast<double>(hm.h - 1) / (image.h - 1) : 0.0;
    const double sx = image.w > 1 ? static_cast<double>(hm.w - 1) / (image.w - 1) : 0.0;
    for (int y = 0; y < image.h; ++y) {
        for (int x = 0; x < image.w; ++x) {
            const double t = sample_bilinear(hm, y * sy, x * sx);
            double rgb[3];
            colormap(t, rgb);
            for (int c = 0; c < 3; ++c) {
                const double blended =
                    (1.0 - alpha) * image.at(y, x, c) + alpha * 255.0 * rgb[c];
                out.at(y, x, c) = static_cast<std::uint8_t>(std::lround(blended));
            }
        }
    }
    return out;
}

std::vector<std::string> fig6_panel(ModelAssembly& m, const Image& image,
                                    const std::string& stem, const std::string& out_dir,
                                    int target_grade) {
    fs::create_directories(out_dir);
    auto input = image_to_tensor(
        image.h == m.config.input_size && image.w == m.config.input_size
            ? image
            : rescale_image(image, m.config.input_size, m.config.input_size));
    if (target_grade < 0) {
        Tape tape;
        auto fwd = model_forward(tape, input, m, /*training=*/false, /*seed=*/0);
        target_grade = ops::argmax_rows(*fwd.logits)[0];
    }
    std::vector<std::string> paths;
    const auto out_path = [&](const std::string& tag) {
        return (fs::path(out_dir) / (stem + "." + tag + ".png")).string();
    };
    paths.push_back(out_path("orig"));
    save_png(paths.back(), image);
    for (Stage stage : {Stage::pre_attention, Stage::gab, Stage::cab}) {
        Heatmap hm = grad_cam(m, input, target_grade, stage);
        paths.push_back(out_path(to_string(stage)));
        save_png(paths.back(), render_overlay(hm, image));
    }
    return paths;
}

}  // namespace drg
