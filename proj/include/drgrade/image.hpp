#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "drgrade/tensor.hpp"

namespace drg {

enum class AugOp { rot90, rot180, rot270, hflip };

std::string to_string(AugOp op);
AugOp aug_op_from_string(const std::string& s);

// 8-bit RGB image, interleaved row-major.
struct Image {
    int h = 0, w = 0;
    std::vector<std::uint8_t> px;  // h*w*3

    Image() = default;
    Image(int h_, int w_) : h(h_), w(w_), px(static_cast<std::size_t>(h_) * w_ * 3, 0) {}

    std::uint8_t& at(int y, int x, int ch) {
        return px[(static_cast<std::size_t>(y) * w + x) * 3 + ch];
    }
    std::uint8_t at(int y, int x, int ch) const {
        return px[(static_cast<std::size_t>(y) * w + x) * 3 + ch];
    }
    bool operator==(const Image&) const = default;
};

Image load_image(const std::string& path);            // PNG/JPEG
void save_png(const std::string& path, const Image&); // PNG only

// Bilinear resize with corner alignment: corner pixels of the output take the
// corner values of the input exactly.
Image rescale_image(const Image& in, int target_h, int target_w);

// Exact pixel permutations; rotations require a square image.
Image augment(const Image& in, AugOp op);

// (1, 3, h, w), values scaled to [0,1]
TensorRef image_to_tensor(const Image& in);
// batch stack of equally sized images
TensorRef images_to_tensor(const std::vector<Image>& batch);

}  // namespace drg
