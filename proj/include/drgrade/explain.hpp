#pragma once

#include <string>
#include <vector>

#include "drgrade/backbone.hpp"
#include "drgrade/image.hpp"

namespace drg {

enum class Stage { pre_attention, gab, cab };
std::string to_string(Stage s);
Stage stage_from_string(const std::string& s);  // accepts noattn|gab|cab

struct Heatmap {
    int h = 0, w = 0;
    std::vector<double> values;  // normalized to [0,1]; all zero when flat
    Stage stage = Stage::pre_attention;
    int target_grade = 0;
    bool flat = false;
};

// Gradient of the target-grade logit w.r.t. the tagged stage's activation;
// channel weights are the spatial mean of that gradient; the map is the
// relu of the weighted channel sum, min-max normalized.
Heatmap grad_cam(ModelAssembly& m, const TensorRef& image, int target_grade, Stage stage);

// Alpha-blended colorized overlay at the image's resolution (heatmap
// upsampled bilinearly). alpha = 0 reproduces the original image.
Image render_overlay(const Heatmap& hm, const Image& image, double alpha = 0.4);

// Writes <stem>.{orig,noattn,gab,cab}.png into out_dir; target_grade < 0
// means "use the predicted grade". Returns the four paths in that order.
std::vector<std::string> fig6_panel(ModelAssembly& m, const Image& image,
                                    const std::string& stem, const std::string& out_dir,
                                    int target_grade = -1);

}  // namespace drg
