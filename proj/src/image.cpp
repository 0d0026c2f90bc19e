#include "drgrade/image.hpp"

#include <cmath>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

namespace drg {

std::string to_string(AugOp op) {
    switch (op) {
        case AugOp::rot90: return "rot90";
        case AugOp::rot180: return "rot180";
        case AugOp::rot270: return "rot270";
        case AugOp::hflip: return "hflip";
    }
    return "?";
}

AugOp aug_op_from_string(const std::string& s) {
    if (s == "rot90") return AugOp::rot90;
    if (s == "rot180") return AugOp::rot180;
    if (s == "rot270") return AugOp::rot270;
    if (s == "hflip") return AugOp::hflip;
    throw ValidationError("unknown augmentation op: " + s);
}

Image load_image(const std::string& path) {
    cv::Mat bgr = cv::imread(path, cv::IMREAD_COLOR);
    if (bgr.empty()) throw IoError("cannot read image: " + path);
    Image out(bgr.rows, bgr.cols);
    for (int y = 0; y < out.h; ++y) {
        const auto* row = bgr.ptr<cv::Vec3b>(y);
        for (int x = 0; x < out.w; ++x) {
            out.at(y, x, 0) = row[x][2];
            out.at(y, x, 1) = row[x][1];
            out.at(y, x, 2) = row[x][0];
        }
    }
    return out;
}

void save_png(const std::string& path, const Image& img) {
    cv::Mat bgr(img.h, img.w, CV_8UC3);
    for (int y = 0; y < img.h; ++y) {
        auto* row = bgr.ptr<cv::Vec3b>(y);
        for (int x = 0; x < img.w; ++x) {
            row[x][0] = img.at(y, x, 2);
            row[x][1] = img.at(y, x, 1);
            row[x][2] = img.at(y, x, 0);
        }
    }
    if (!cv::imwrite(path, bgr)) throw IoError("cannot write image: " + path);
}

Image rescale_image(const Image& in, int target_h, int target_w) {
    if (in.h < 1 || in.w < 1) throw ValidationError("rescale: empty image");
    if (in.h == target_h && in.w == target_w) return in;
    Image out(target_h, target_w);
    const double sy = target_h > 1 ? static_cast<double>(in.h - 1) / (target_h - 1) : 0.0;
    const double sx = target_w > 1 ? static_cast<double>(in.w - 1) / (target_w - 1) : 0.0;
    for (int y = 0; y < target_h; ++y) {
        const double fy = y * sy;
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, in.h - 1);
        const double wy = fy - y0;
        for (int x = 0; x < target_w; ++x) {
            const double fx = x * sx;
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, in.w - 1);
            const double wx = fx - x0;
            for (int ch = 0; ch < 3; ++ch) {
                const double top = (1.0 - wx) * in.at(y0, x0, ch) + wx * in.at(y0, x1, ch);
                const double bot = (1.0 - wx) * in.at(y1, x0, ch) + wx * in.at(y1, x1, ch);
                const double v = (1.0 - wy) * top + wy * bot;
                out.at(y, x, ch) = static_cast<std::uint8_t>(std::lround(v));
            }
        }
    }
    return out;
}

Image augment(const Image& in, AugOp op) {
    if (op != AugOp::hflip && in.h != in.w) {
        throw ValidationError("rotation requires a square image");
    }
    Image out(op == AugOp::hflip || op == AugOp::rot180 ? in.h : in.w,
              op == AugOp::hflip || op == AugOp::rot180 ? in.w : in.h);
    for (int y = 0; y < out.h; ++y) {
        for (int x = 0; x < out.w; ++x) {
            int sy = 0, sx = 0;
            switch (op) {
                case AugOp::rot90:  // 90 degrees clockwise
                    sy = in.h - 1 - x;
                    sx = y;
                    break;
                case AugOp::rot180:
                    sy = in.h - 1 - y;
                    sx = in.w - 1 - x;
                    break;
                case AugOp::rot270:
                    sy = x;
                    sx = in.w - 1 - y;
                    break;
                case AugOp::hflip:
                    sy = y;
                    sx = in.w - 1 - x;
                    break;
            }
            for (int ch = 0; ch < 3; ++ch) out.at(y, x, ch) = in.at(sy, sx, ch);
        }
    }
    return out;
}

TensorRef image_to_tensor(const Image& in) {
    auto t = make_tensor({1, 3, in.h, in.w});
    for (int ch = 0; ch < 3; ++ch) {
        for (int y = 0; y < in.h; ++y) {
            for (int x = 0; x < in.w; ++x) {
                t->at(0, ch, y, x) = in.at(y, x, ch) / 255.0;
            }
        }
    }
    return t;
}

TensorRef images_to_tensor(const std::vector<Image>& batch) {
    if (batch.empty()) throw ValidationError("empty image batch");
    const int h = batch[0].h, w = batch[0].w;
    auto t = make_tensor({static_cast<int>(batch.size()), 3, h, w});
    for (std::size_t n = 0; n < batch.size(); ++n) {
        if (batch[n].h != h || batch[n].w != w) {
            throw ShapeError("image batch sizes differ");
        }
        for (int ch = 0; ch < 3; ++ch) {
            for (int y = 0; y < h; ++y) {
                for (int x = 0; x < w; ++x) {
                    t->at(static_cast<int>(n), ch, y, x) = batch[n].at(y, x, ch) / 255.0;
                }
            }
        }
    }
    return t;
}

}  // namespace drg
