#include "drgrade/backbone.hpp"

#include <nlohmann/json.hpp>

#include "drgrade/checkpoint.hpp"
#include "drgrade/init.hpp"
#include "drgrade/ops.hpp"
#include "drgrade/rng.hpp"

namespace drg {

using nlohmann::json;

std::string to_string(AblationMode mode) {
    switch (mode) {
        case AblationMode::baseline: return "baseline";
        case AblationMode::gab_only: return "gab_only";
        case AblationMode::cab_only: return "cab_only";
        case AblationMode::gab_cab: return "gab_cab";
    }
    return "?";
}

AblationMode ablation_mode_from_string(const std::string& s) {
    if (s == "baseline") return AblationMode::baseline;
    if (s == "gab_only") return AblationMode::gab_only;
    if (s == "cab_only") return AblationMode::cab_only;
    if (s == "gab_cab") return AblationMode::gab_cab;
    throw ConfigError("unknown ablation mode: " + s);
}

void ModelConfig::validate() const {
    if (widths.empty()) throw ConfigError("model: at least one backbone stage required");
    for (int w : widths) {
        if (w < 1) throw ConfigError("model: stage widths must be positive");
    }
    if (input_size < 1 || input_size % (1 << widths.size()) != 0) {
        throw ConfigError("model: input_size " + std::to_string(input_size) +
                          " not divisible by total downsample factor " +
                          std::to_string(1 << widths.size()));
    }
    if (reduced_channels < 1 || reduction < 1 || reduced_channels % reduction != 0) {
        throw ConfigError("model: reduced_channels must be divisible by reduction");
    }
    if (k < 1 || num_classes < 2) throw ConfigError("model: need k >= 1, num_classes >= 2");
    if (dropout_rate < 0.0 || dropout_rate >= 1.0) {
        throw ConfigError("model: dropout_rate must be in [0,1)");
    }
}

ModelAssembly ModelAssembly::init(const ModelConfig& config, std::uint64_t seed) {
    config.validate();
    ModelAssembly m;
    m.config = config;
    m.spec.widths = config.widths;
    int c_in = m.spec.in_channels;
    for (int i = 0; i < m.spec.stages(); ++i) {
        const int c_out = m.spec.widths[i];
        const std::string base = "backbone.stage" + std::to_string(i) + ".conv";
        m.backbone.emplace_back(base + ".weight",
                                he_normal({c_out, c_in, 3, 3}, 9ull * c_in,
                                          derive_seed(seed, base)));
        m.backbone.emplace_back(base + ".bias", make_tensor({1, c_out, 1, 1}));
        c_in = c_out;
    }
    m.reduce_w = Parameter("reduce.weight",
                           he_normal({config.reduced_channels, c_in, 1, 1}, c_in,
                                     derive_seed(seed, "reduce")));
    m.reduce_b = Parameter("reduce.bias", make_tensor({1, config.reduced_channels, 1, 1}));
    m.gab = GabState::init(config.reduced_channels, config.reduction,
                           derive_seed(seed, "gab"));
    m.cab = CabState::init(config.reduced_channels, config.k, config.num_classes,
                           config.dropout_rate, derive_seed(seed, "cab"));
    m.cab.sigmoid_map = config.cab_sigmoid;
    m.head_w = Parameter("head.weight",
                         he_normal({config.num_classes, config.reduced_channels, 1, 1},
                                   config.reduced_channels, derive_seed(seed, "head")));
    m.head_b = Parameter("head.bias", make_tensor({1, config.num_classes, 1, 1}));
    return m;
}

std::vector<Parameter*> ModelAssembly::params() {
    std::vector<Parameter*> out;
    for (auto& p : backbone) out.push_back(&p);
    out.push_back(&reduce_w);
    out.push_back(&reduce_b);
    if (uses_gab()) {
        for (auto* p : gab.params()) out.push_back(p);
    }
    if (uses_cab()) {
        for (auto* p : cab.params()) out.push_back(p);
    }
    out.push_back(&head_w);
    out.push_back(&head_b);
    return out;
}

std::vector<Parameter*> ModelAssembly::backbone_params() {
    std::vector<Parameter*> out;
    for (auto& p : backbone) out.push_back(&p);
    return out;
}

std::size_t ModelAssembly::param_count() {
    std::size_t total = 0;
    for (auto* p : params()) total += p->tensor->v.size();
    return total;
}

void ModelAssembly::zero_grads() {
    for (auto* p : params()) p->tensor->zero_grad();
}

void ModelAssembly::set_backbone_frozen(bool frozen) {
    for (auto& p : backbone) p.trainable = !frozen;
}

TensorRef backbone_forward(Tape& tape, const TensorRef& image, const BackboneSpec& spec,
                           std::vector<Parameter>& params) {
    if (image->shape.c != spec.in_channels) {
        throw ShapeError("backbone: expected " + std::to_string(spec.in_channels) +
                         " input channels");
    }
    if (image->shape.h % spec.total_downsample() != 0 ||
        image->shape.w % spec.total_downsample() != 0) {
        throw ConfigError("backbone: input resolution not divisible by downsample factor " +
                          std::to_string(spec.total_downsample()));
    }
    TensorRef x = image;
    for (int i = 0; i < spec.stages(); ++i) {
        x = ops::conv3x3(tape, x, params[2 * i].tensor, params[2 * i + 1].tensor);
        x = ops::relu(tape, x);
        x = ops::avg_pool2x2(tape, x);
    }
    return x;
}

TensorRef reduce_features(Tape& tape, const TensorRef& features, ModelAssembly& m) {
    return ops::conv1x1(tape, features, m.reduce_w.tensor, m.reduce_b.tensor);
}

TensorRef classify_head(Tape& tape, const TensorRef& f_out, ModelAssembly& m) {
    auto pooled = ops::global_avg_pool(tape, f_out);
    return ops::fully_connected(tape, pooled, m.head_w.tensor, m.head_b.tensor);
}

ForwardResult model_forward(Tape& tape, const TensorRef& image, ModelAssembly& m,
                            bool training, std::uint64_t seed) {
    ForwardResult r;
    auto feats = backbone_forward(tape, image, m.spec, m.backbone);
    r.f_reduce = reduce_features(tape, feats, m);
    r.gab_out = m.uses_gab() ? gab_forward(tape, r.f_reduce, m.gab) : r.f_reduce;
    if (m.uses_cab()) {
        auto cab = cab_forward(tape, r.gab_out, m.cab, training,
                               derive_seed(seed, "cab.dropout"));
        r.cab_out = cab.out;
        r.cab = std::move(cab.artifacts);
    } else {
        r.cab_out = r.gab_out;
    }
    r.logits = classify_head(tape, r.cab_out, m);
    return r;
}

ModelAssembly ablation_variant(const ModelConfig& base, AblationMode mode,
                               std::uint64_t seed) {
    ModelConfig cfg = base;
    cfg.mode = mode;
    return ModelAssembly::init(cfg, seed);
}

std::string model_config_to_text(const ModelConfig& c) {
    json j;
    j["widths"] = c.widths;
    j["input_size"] = c.input_size;
    j["reduced_channels"] = c.reduced_channels;
    j["reduction"] = c.reduction;
    j["k"] = c.k;
    j["num_classes"] = c.num_classes;
    j["dropout_rate"] = c.dropout_rate;
    j["cab_sigmoid"] = c.cab_sigmoid;
    j["aux_score_loss_weight"] = c.aux_score_loss_weight;
    j["mode"] = to_string(c.mode);
    return j.dump(2) + "\n";
}

ModelConfig model_config_from_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("model config parse error: ") + e.what());
    }
    ModelConfig c;
    c.widths = j.at("widths").get<std::vector<int>>();
    c.input_size = j.at("input_size").get<int>();
    c.reduced_channels = j.at("reduced_channels").get<int>();
    c.reduction = j.at("reduction").get<int>();
    c.k = j.at("k").get<int>();
    c.num_classes = j.at("num_classes").get<int>();
    c.dropout_rate = j.at("dropout_rate").get<double>();
    c.cab_sigmoid = j.at("cab_sigmoid").get<bool>();
    c.aux_score_loss_weight = j.at("aux_score_loss_weight").get<double>();
    c.mode = ablation_mode_from_string(j.at("mode").get<std::string>());
    c.validate();
    return c;
}

void save_assembly(const std::string& path, ModelAssembly& m) {
    std::vector<Parameter> flat;
    for (auto* p : m.params()) flat.push_back(*p);
    save_checkpoint(path, model_config_to_text(m.config), flat);
}

ModelAssembly load_assembly(const std::string& path) {
    Checkpoint ck = load_checkpoint(path);
    ModelConfig cfg = model_config_from_text(ck.metadata);
    ModelAssembly m = ModelAssembly::init(cfg, /*seed=*/0);
    for (auto* p : m.params()) {
        const auto* rec = ck.find(p->name);
        if (rec == nullptr) {
            throw IoError("checkpoint missing parameter: " + p->name);
        }
        if (!(rec->shape == p->tensor->shape)) {
            throw IoError("checkpoint shape mismatch for " + p->name);
        }
        p->tensor->v = rec->values;
    }
    return m;
}

}  // namespace drg
