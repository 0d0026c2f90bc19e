#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "drgrade/backbone.hpp"
#include "drgrade/datapipe.hpp"
#include "drgrade/metrics.hpp"

namespace drg {

struct TrainConfig {
    int epochs = 40;
    int batch_size = 16;  // Algorithm text default; 32 also documented
    double lr_phase1 = 5e-3;
    double lr_phase2 = 8e-5;
    int phase1_epochs = 10;
    int plateau_patience = 3;
    double plateau_factor = 0.8;
    int k = 5;
    std::uint64_t seed = 0;

    void validate() const;
};

std::string train_config_to_text(const TrainConfig& c);
TrainConfig train_config_from_text(const std::string& text);

struct EpochLog {
    int epoch = 0;
    double train_loss = 0.0, train_acc = 0.0;
    double val_loss = 0.0, val_acc = 0.0;
    double lr = 0.0;
};

std::string epoch_logs_to_csv(const std::vector<EpochLog>& logs);

// Stateful LR-on-plateau rule. The first observation seeds the running best
// and opens the first patience window; the counter resets on improvement or
// on a reduction.
class PlateauState {
public:
    double update(double val_loss, double lr, int patience, double factor);

private:
    bool seeded_ = false;
    double best_ = 0.0;
    int bad_ = 0;
};

// Pure replay of the rule over a full history.
double plateau_schedule(const std::vector<double>& val_losses, double lr, int patience,
                        double factor);

struct TrainResult {
    std::vector<EpochLog> logs;
    int best_epoch = -1;
    double best_val_loss = 0.0;
    std::string best_checkpoint;   // out_dir/best.ckpt
    std::string final_checkpoint;  // out_dir/final.ckpt
};

// Algorithm-1 loop: phase 1 trains head/attention with a frozen backbone at
// lr_phase1, phase 2 unfreezes everything at lr_phase2; plateau rule applies
// in both phases; best checkpoint = minimum validation loss.
TrainResult train(ModelAssembly& m, const Manifest& manifest, const TrainConfig& cfg,
                  const std::string& out_dir);

MetricsReport evaluate(ModelAssembly& m, const Manifest& manifest, Split split);

struct AblationRow {
    AblationMode mode;
    double accuracy = 0.0;
    double f1_macro = 0.0;
    std::size_t param_count = 0;
};
struct AblationReport {
    std::vector<AblationRow> rows;  // baseline, gab_only, cab_only, gab_cab
};

// Trains and evaluates all four variants with identical seeds and data.
AblationReport run_ablation(const ModelConfig& model_cfg, const TrainConfig& train_cfg,
                            const Manifest& manifest, const std::string& out_dir,
                            const std::vector<AblationMode>& modes = {
                                AblationMode::baseline, AblationMode::gab_only,
                                AblationMode::cab_only, AblationMode::gab_cab});

std::string ablation_report_to_text(const AblationReport& r);

}  // namespace drg
