#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "drgrade/image.hpp"

namespace drg::test {

// Writes a small separable synthetic dataset: input_dir/<grade>/<name>.png.
// Each grade gets a distinctive mean color plus a grade-positioned bright
// square, with mild per-image noise.
inline std::string make_synthetic_dataset(const std::string& dir, int per_class,
                                          int img_size, std::uint64_t seed = 7) {
    namespace fs = std::filesystem;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> noise(-12, 12);
    for (int g = 0; g < 5; ++g) {
        fs::create_directories(fs::path(dir) / std::to_string(g));
        for (int i = 0; i < per_class; ++i) {
            Image img(img_size, img_size);
            const int base_r = 30 + 40 * g;
            const int base_g = 200 - 35 * g;
            const int base_b = 60 + 25 * ((g * 3) % 5);
            for (int y = 0; y < img_size; ++y) {
                for (int x = 0; x < img_size; ++x) {
                    const int n = noise(rng);
                    img.at(y, x, 0) = static_cast<std::uint8_t>(std::clamp(base_r + n, 0, 255));
                    img.at(y, x, 1) = static_cast<std::uint8_t>(std::clamp(base_g + n, 0, 255));
                    img.at(y, x, 2) = static_cast<std::uint8_t>(std::clamp(base_b + n, 0, 255));
                }
            }
            // bright square whose position encodes the grade
            const int block = std::max(2, img_size / 5);
            const int off = g * (img_size - block) / 4;
            for (int y = off; y < off + block; ++y) {
                for (int x = off; x < off + block; ++x) {
                    img.at(y, x, 0) = 245;
                    img.at(y, x, 1) = 245;
                    img.at(y, x, 2) = 245;
                }
            }
            save_png((fs::path(dir) / std::to_string(g) /
                      ("img" + std::to_string(i) + ".png"))
                         .string(),
                     img);
        }
    }
    return dir;
}

inline std::string temp_dir(const std::string& name) {
    namespace fs = std::filesystem;
    const fs::path p = fs::temp_directory_path() / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p.string();
}

}  // namespace drg::test
