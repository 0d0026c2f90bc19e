#include "drgrade/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "drgrade/adam.hpp"
#include "drgrade/ops.hpp"
#include "drgrade/rng.hpp"

namespace fs = std::filesystem;

namespace drg {

using nlohmann::json;

void TrainConfig::validate() const {
    if (epochs < 0 || batch_size < 1 || phase1_epochs < 0 || plateau_patience < 1 ||
        k < 1) {
        throw ConfigError("train config: counts must be positive");
    }
    if (lr_phase1 <= 0.0 || lr_phase2 <= 0.0) throw ConfigError("train config: lr must be > 0");
    if (plateau_factor <= 0.0 || plateau_factor >= 1.0) {
        throw ConfigError("train config: plateau_factor must be in (0,1)");
    }
}

std::string train_config_to_text(const TrainConfig& c) {
    json j;
    j["epochs"] = c.epochs;
    j["batch_size"] = c.batch_size;
    j["lr_phase1"] = c.lr_phase1;
    j["lr_phase2"] = c.lr_phase2;
    j["phase1_epochs"] = c.phase1_epochs;
    j["plateau_patience"] = c.plateau_patience;
    j["plateau_factor"] = c.plateau_factor;
    j["k"] = c.k;
    j["seed"] = c.seed;
    return j.dump(2) + "\n";
}

TrainConfig train_config_from_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("train config parse error: ") + e.what());
    }
    static const char* known[] = {"epochs",          "batch_size",      "lr_phase1",
                                  "lr_phase2",       "phase1_epochs",   "plateau_patience",
                                  "plateau_factor",  "k",               "seed"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known) ok = ok || it.key() == k;
        if (!ok) throw ConfigError("train config: unknown key: " + it.key());
    }
    TrainConfig c;
    if (j.contains("epochs")) c.epochs = j["epochs"].get<int>();
    if (j.contains("batch_size")) c.batch_size = j["batch_size"].get<int>();
    if (j.contains("lr_phase1")) c.lr_phase1 = j["lr_phase1"].get<double>();
    if (j.contains("lr_phase2")) c.lr_phase2 = j["lr_phase2"].get<double>();
    if (j.contains("phase1_epochs")) c.phase1_epochs = j["phase1_epochs"].get<int>();
    if (j.contains("plateau_patience")) c.plateau_patience = j["plateau_patience"].get<int>();
    if (j.contains("plateau_factor")) c.plateau_factor = j["plateau_factor"].get<double>();
    if (j.contains("k")) c.k = j["k"].get<int>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    c.validate();
    return c;
}

std::string epoch_logs_to_csv(const std::vector<EpochLog>& logs) {
    std::ostringstream os;
    os << "epoch,train_loss,train_acc,val_loss,val_acc,lr\n";
    char buf[160];
    for (const auto& l : logs) {
        std::snprintf(buf, sizeof(buf), "%d,%.12g,%.12g,%.12g,%.12g,%.12g\n", l.epoch,
                      l.train_loss, l.train_acc, l.val_loss, l.val_acc, l.lr);
        os << buf;
    }
    return os.str();
}

double PlateauState::update(double val_loss, double lr, int patience, double factor) {
    if (!seeded_) {
        seeded_ = true;
        best_ = val_loss;
        bad_ = 1;  // the seeding epoch did not improve anything yet
    } else if (val_loss < best_) {
        best_ = val_loss;
        bad_ = 0;
        return lr;
    } else {
        ++bad_;
    }
    if (bad_ >= patience) {
        bad_ = 0;
        return lr * factor;
    }
    return lr;
}

double plateau_schedule(const std::vector<double>& val_losses, double lr, int patience,
                        double factor) {
    PlateauState st;
    for (double v : val_losses) lr = st.update(v, lr, patience, factor);
    return lr;
}

namespace {

struct LoadedSet {
    std::vector<TensorRef> images;  // (1,3,s,s) each
    std::vector<int> labels;
};

LoadedSet load_split(const Manifest& manifest, Split split, int input_size) {
    LoadedSet set;
    for (const auto& s : manifest.samples) {
        if (s.split != split) continue;
        Image img = load_image(s.path);
        if (img.h != input_size || img.w != input_size) {
            img = rescale_image(img, input_size, input_size);
        }
        set.images.push_back(image_to_tensor(img));
        set.labels.push_back(s.grade);
    }
    return set;
}

TensorRef stack_batch(const LoadedSet& set, const std::vector<std::size_t>& idx,
                      std::size_t begin, std::size_t end, std::vector<int>* labels) {
    const Shape s0 = set.images[idx[begin]]->shape;
    auto batch = make_tensor({static_cast<int>(end - begin), 3, s0.h, s0.w});
    const std::size_t per = s0.size();
    for (std::size_t i = begin; i < end; ++i) {
        std::copy(set.images[idx[i]]->v.begin(), set.images[idx[i]]->v.end(),
                  batch->v.begin() + (i - begin) * per);
        labels->push_back(set.labels[idx[i]]);
    }
    return batch;
}

struct EvalStats {
    double loss = 0.0;
    std::vector<int> preds;
};

EvalStats eval_pass(ModelAssembly& m, const LoadedSet& set, int batch_size) {
    EvalStats st;
    std::vector<std::size_t> idx(set.images.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    double loss_sum = 0.0;
    for (std::size_t b = 0; b < idx.size(); b += batch_size) {
        const std::size_t e = std::min(idx.size(), b + batch_size);
        std::vector<int> labels;
        auto batch = stack_batch(set, idx, b, e, &labels);
        Tape tape;
        auto fwd = model_forward(tape, batch, m, /*training=*/false, /*seed=*/0);
        auto loss = ops::softmax_cross_entropy(tape, fwd.logits, labels);
        loss_sum += loss->v[0] * static_cast<double>(e - b);
        for (int p : ops::argmax_rows(*fwd.logits)) st.preds.push_back(p);
    }
    st.loss = idx.empty() ? 0.0 : loss_sum / static_cast<double>(idx.size());
    return st;
}

}  // namespace

TrainResult train(ModelAssembly& m, const Manifest& manifest, const TrainConfig& cfg,
                  const std::string& out_dir) {
    cfg.validate();
    fs::create_directories(out_dir);
    TrainResult result;
    result.best_checkpoint = (fs::path(out_dir) / "best.ckpt").string();
    result.final_checkpoint = (fs::path(out_dir) / "final.ckpt").string();
    if (cfg.epochs == 0) {
        save_assembly(result.final_checkpoint, m);
        return result;
    }
    LoadedSet train_set = load_split(manifest, Split::train, m.config.input_size);
    LoadedSet val_set = load_split(manifest, Split::val, m.config.input_size);
    if (train_set.images.empty() || val_set.images.empty()) {
        throw ConfigError("train: manifest needs non-empty train and val splits");
    }

    AdamState adam;
    PlateauState plateau;
    double lr = cfg.lr_phase1;
    bool phase2 = false;
    m.set_backbone_frozen(cfg.phase1_epochs > 0);
    if (cfg.phase1_epochs == 0) {
        lr = cfg.lr_phase2;
        phase2 = true;
    }
    result.best_val_loss = std::numeric_limits<double>::infinity();

    std::vector<std::size_t> order(train_set.images.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        if (!phase2 && epoch >= cfg.phase1_epochs) {
            phase2 = true;
            m.set_backbone_frozen(false);
            lr = cfg.lr_phase2;
        }
        std::mt19937_64 shuffle_rng(
            derive_seed(cfg.seed, "shuffle", static_cast<std::uint64_t>(epoch)));
        std::shuffle(order.begin(), order.end(), shuffle_rng);

        double loss_sum = 0.0;
        std::int64_t correct = 0;
        for (std::size_t b = 0; b < order.size(); b += cfg.batch_size) {
            const std::size_t e = std::min(order.size(), b + cfg.batch_size);
            std::vector<int> labels;
            auto batch = stack_batch(train_set, order, b, e, &labels);
            Tape tape;
            const std::uint64_t fwd_seed =
                derive_seed(cfg.seed, "dropout",
                            static_cast<std::uint64_t>(epoch) * 1000003ull + b);
            auto fwd = model_forward(tape, batch, m, /*training=*/true, fwd_seed);
            auto loss = ops::softmax_cross_entropy(tape, fwd.logits, labels);
            if (m.uses_cab() && m.config.aux_score_loss_weight > 0.0) {
                auto aux = ops::softmax_cross_entropy(tape, fwd.cab.scores, labels);
                loss = ops::add(tape, loss,
                                ops::scalar_mul(tape, aux, m.config.aux_score_loss_weight));
            }
            m.zero_grads();
            tape.backward(loss);
            adam.step(m.params(), lr);
            loss_sum += loss->v[0] * static_cast<double>(e - b);
            const auto preds = ops::argmax_rows(*fwd.logits);
            for (std::size_t i = 0; i < preds.size(); ++i) {
                if (preds[i] == labels[i]) ++correct;
            }
        }

        EvalStats val = eval_pass(m, val_set, cfg.batch_size);
        std::int64_t val_correct = 0;
        for (std::size_t i = 0; i < val.preds.size(); ++i) {
            if (val.preds[i] == val_set.labels[i]) ++val_correct;
        }

        EpochLog log;
        log.epoch = epoch;
        log.train_loss = loss_sum / static_cast<double>(order.size());
        log.train_acc = static_cast<double>(correct) / static_cast<double>(order.size());
        log.val_loss = val.loss;
        log.val_acc = static_cast<double>(val_correct) / static_cast<double>(val.preds.size());
        log.lr = lr;
        result.logs.push_back(log);

        if (val.loss < result.best_val_loss) {
            result.best_val_loss = val.loss;
            result.best_epoch = epoch;
            save_assembly(result.best_checkpoint, m);
        }
        lr = plateau.update(val.loss, lr, cfg.plateau_patience, cfg.plateau_factor);
    }
    save_assembly(result.final_checkpoint, m);
    std::ofstream(fs::path(out_dir) / "epochs.csv") << epoch_logs_to_csv(result.logs);
    return result;
}

MetricsReport evaluate(ModelAssembly& m, const Manifest& manifest, Split split) {
    LoadedSet set = load_split(manifest, split, m.config.input_size);
    if (set.images.empty()) {
        throw ConfigError("evaluate: split '" + to_string(split) + "' is empty");
    }
    EvalStats st = eval_pass(m, set, 16);
    return compute_report(
        confusion_from_predictions(set.labels, st.preds, m.config.num_classes));
}

AblationReport run_ablation(const ModelConfig& model_cfg, const TrainConfig& train_cfg,
                            const Manifest& manifest, const std::string& out_dir,
                            const std::vector<AblationMode>& modes) {
    AblationReport report;
    for (AblationMode mode : modes) {
        ModelAssembly m = ablation_variant(model_cfg, mode, train_cfg.seed);
        const std::string run_dir = (fs::path(out_dir) / to_string(mode)).string();
        train(m, manifest, train_cfg, run_dir);
        MetricsReport mr = evaluate(m, manifest, Split::val);
        AblationRow row;
        row.mode = mode;
        row.accuracy = mr.accuracy;
        row.f1_macro = mr.f1_macro;
        row.param_count = m.param_count();
        report.rows.push_back(row);
    }
    return report;
}

std::string ablation_report_to_text(const AblationReport& r) {
    std::ostringstream os;
    os << "method,accuracy,f1_macro,parameters\n";
    char buf[120];
    for (const auto& row : r.rows) {
        std::snprintf(buf, sizeof(buf), "%s,%.12g,%.12g,%zu\n",
                      to_string(row.mode).c_str(), row.accuracy, row.f1_macro,
                      row.param_count);
        os << buf;
    }
    return os.str();
}

}  // namespace drg
