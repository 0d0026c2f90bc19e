#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "drgrade/attention.hpp"
#include "drgrade/tensor.hpp"

namespace drg {

enum class AblationMode { baseline, gab_only, cab_only, gab_cab };

std::string to_string(AblationMode mode);
AblationMode ablation_mode_from_string(const std::string& s);

// Reference backbone: per stage a 3x3 conv (stride 1, pad 1), relu, then 2x2
// average-pool downsample. Stands in for the pretrained networks the full
// pipeline would plug in here.
struct BackboneSpec {
    std::vector<int> widths = {16, 32, 64, 128};
    int in_channels = 3;

    int stages() const { return static_cast<int>(widths.size()); }
    int total_downsample() const { return 1 << stages(); }
    int out_channels() const { return widths.back(); }
};

struct ModelConfig {
    std::vector<int> widths = {16, 32, 64, 128};
    int input_size = 64;          // documented full-scale default is 512
    int reduced_channels = 128;   // c'
    int reduction = 8;            // GAB bottleneck ratio
    int k = 5;                    // CAB channels per class
    int num_classes = 5;          // DR0..DR4
    double dropout_rate = 0.5;
    bool cab_sigmoid = false;
    double aux_score_loss_weight = 0.0;
    AblationMode mode = AblationMode::gab_cab;

    void validate() const;
};

// Full model: backbone -> 1x1 reduce -> GAB -> CAB -> GAP/FC head. Disabled
// attention blocks (per ablation mode) are identity passthroughs and excluded
// from the parameter count.
struct ModelAssembly {
    ModelConfig config;
    BackboneSpec spec;
    std::vector<Parameter> backbone;  // stage{i}.conv weight/bias pairs
    Parameter reduce_w, reduce_b;
    GabState gab;
    CabState cab;
    Parameter head_w, head_b;

    static ModelAssembly init(const ModelConfig& config, std::uint64_t seed);

    bool uses_gab() const {
        return config.mode == AblationMode::gab_only || config.mode == AblationMode::gab_cab;
    }
    bool uses_cab() const {
        return config.mode == AblationMode::cab_only || config.mode == AblationMode::gab_cab;
    }

    // Active parameters only (disabled attention blocks excluded).
    std::vector<Parameter*> params();
    std::vector<Parameter*> backbone_params();
    std::size_t param_count();
    void zero_grads();
    void set_backbone_frozen(bool frozen);
};

struct ForwardResult {
    TensorRef logits;     // (n, L, 1, 1)
    TensorRef f_reduce;   // pre-attention reduced features
    TensorRef gab_out;    // after GAB (== f_reduce when GAB disabled)
    TensorRef cab_out;    // after CAB (== gab_out when CAB disabled)
    CabForwardArtifacts cab;  // null refs when CAB disabled
};

TensorRef backbone_forward(Tape& tape, const TensorRef& image, const BackboneSpec& spec,
                           std::vector<Parameter>& params);
TensorRef reduce_features(Tape& tape, const TensorRef& features, ModelAssembly& m);
TensorRef classify_head(Tape& tape, const TensorRef& f_out, ModelAssembly& m);
ForwardResult model_forward(Tape& tape, const TensorRef& image, ModelAssembly& m,
                            bool training, std::uint64_t seed);

// Fresh assembly for an ablation arm: same seed-derived initialization, the
// named attention blocks swapped for identity passthroughs.
ModelAssembly ablation_variant(const ModelConfig& base, AblationMode mode,
                               std::uint64_t seed);

// Checkpoint round-trip for a whole assembly (hyperparameters in metadata).
void save_assembly(const std::string& path, ModelAssembly& m);
ModelAssembly load_assembly(const std::string& path);
std::string model_config_to_text(const ModelConfig& c);
ModelConfig model_config_from_text(const std::string& text);

}  // namespace drg
