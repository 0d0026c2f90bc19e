#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "drgrade/datapipe.hpp"
#include "drgrade/ops.hpp"
#include "drgrade/explain.hpp"
#include "drgrade/trainer.hpp"

namespace fs = std::filesystem;
using namespace drg;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open: " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::array<double, 3> parse_fractions(const std::string& s) {
    std::array<double, 3> f{};
    std::istringstream ss(s);
    std::string tok;
    for (int i = 0; i < 3; ++i) {
        if (!std::getline(ss, tok, ',')) throw ConfigError("--split needs 3 fractions");
        f[i] = std::stod(tok);
    }
    return f;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::istringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
    return out;
}

// flags > config file > defaults, with per-field provenance
struct ResolvedConfig {
    TrainConfig train;
    ModelConfig model;
    std::map<std::string, std::string> provenance;
};

struct TrainFlags {
    CLI::App* cmd = nullptr;
    std::string config_file;
    int epochs = 0, batch_size = 0, phase1_epochs = 0, k = 0, input_size = 0;
    std::uint64_t seed = 0;
    std::string mode, widths;
    bool print_config = false;

    void attach(CLI::App* app) {
        cmd = app;
        app->add_option("--config", config_file, "training config file (JSON)");
        app->add_option("--epochs", epochs, "epoch budget");
        app->add_option("--batch-size", batch_size, "minibatch size");
        app->add_option("--phase1-epochs", phase1_epochs, "frozen-backbone epochs");
        app->add_option("--k", k, "attention channels per class");
        app->add_option("--seed", seed, "root seed");
        app->add_option("--mode", mode, "baseline|gab_only|cab_only|gab_cab");
        app->add_option("--input-size", input_size, "square input resolution");
        app->add_option("--widths", widths, "backbone stage widths, comma separated");
        app->add_flag("--print-config", print_config, "dump the resolved config and exit");
    }

    ResolvedConfig resolve() const {
        ResolvedConfig r;
        const char* train_keys[] = {"epochs",         "batch_size",       "lr_phase1",
                                    "lr_phase2",      "phase1_epochs",    "plateau_patience",
                                    "plateau_factor", "k",                "seed"};
        for (const char* key : train_keys) r.provenance[key] = "default";
        if (!config_file.empty()) {
            r.train = train_config_from_text(read_file(config_file));
            TrainConfig defaults;
            nlohmann::json jd = nlohmann::json::parse(train_config_to_text(defaults));
            nlohmann::json jf = nlohmann::json::parse(train_config_to_text(r.train));
            for (const char* key : train_keys) {
                if (jf[key] != jd[key]) r.provenance[key] = "file";
            }
        }
        const auto set = [&](const std::string& name, auto& dst, const auto& src) {
            if (cmd->count("--" + name) > 0) {
                dst = src;
                r.provenance[name] = "flag";
            }
        };
        set("epochs", r.train.epochs, epochs);
        set("batch-size", r.train.batch_size, batch_size);
        set("phase1-epochs", r.train.phase1_epochs, phase1_epochs);
        set("k", r.train.k, k);
        set("seed", r.train.seed, seed);
        r.train.validate();
        r.model.k = r.train.k;
        if (cmd->count("--mode") > 0) r.model.mode = ablation_mode_from_string(mode);
        if (cmd->count("--input-size") > 0) r.model.input_size = input_size;
        if (cmd->count("--widths") > 0) r.model.widths = parse_int_list(widths);
        r.model.validate();
        return r;
    }
};

int run_preprocess(const std::string& input_dir, const std::string& out_dir,
                   const std::string& out_manifest, int resize,
                   const std::string& augment, const std::string& split,
                   std::uint64_t seed) {
    Manifest m = preprocess_pipeline(input_dir, out_dir, resize,
                                     aug_policy_from_string(augment),
                                     parse_fractions(split), seed);
    write_manifest(out_manifest, m);
    std::cerr << "wrote " << m.samples.size() << " samples to " << out_manifest << "\n";
    return 0;
}

int run_train(const TrainFlags& flags, const std::string& manifest_path,
              const std::string& out_dir) {
    ResolvedConfig cfg = flags.resolve();
    if (flags.print_config) {
        for (const auto& [key, src] : cfg.provenance) {
            std::cerr << "# " << key << ": " << src << "\n";
        }
        std::cout << train_config_to_text(cfg.train);
        return 0;
    }
    Manifest manifest = read_manifest(manifest_path);
    ModelAssembly m = ModelAssembly::init(cfg.model, cfg.train.seed);
    TrainResult result = train(m, manifest, cfg.train, out_dir);
    if (!result.logs.empty()) {
        const auto& last = result.logs.back();
        std::cerr << "final epoch " << last.epoch << ": train_acc=" << last.train_acc
                  << " val_acc=" << last.val_acc << "\n";
    }
    return 0;
}

int run_eval(const std::string& ckpt, const std::string& manifest_path,
             const std::string& split, const std::string& out_file) {
    ModelAssembly m = load_assembly(ckpt);
    Manifest manifest = read_manifest(manifest_path);
    MetricsReport report = evaluate(m, manifest, split_from_string(split));
    const std::string text = report_to_text(report);
    if (out_file.empty()) {
        std::cout << text;
    } else {
        std::ofstream os(out_file);
        if (!os) throw IoError("cannot write: " + out_file);
        os << text;
    }
    return 0;
}

int run_ablate(const TrainFlags& flags, const std::string& manifest_path,
               const std::string& out_dir, const std::string& modes_csv) {
    ResolvedConfig cfg = flags.resolve();
    std::vector<AblationMode> modes;
    std::istringstream ss(modes_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) modes.push_back(ablation_mode_from_string(tok));
    Manifest manifest = read_manifest(manifest_path);
    AblationReport report = run_ablation(cfg.model, cfg.train, manifest, out_dir, modes);
    const std::string text = ablation_report_to_text(report);
    std::ofstream(fs::path(out_dir) / "ablation.csv") << text;
    std::cout << text;
    return 0;
}

int run_explain(const std::string& ckpt, const std::string& image_path,
                const std::string& manifest_path, const std::string& grade,
                const std::string& stages, const std::string& out_dir) {
    ModelAssembly m = load_assembly(ckpt);
    int target = -1;
    if (grade != "auto") {
        target = std::stoi(grade);
        if (target < 0 || target >= m.config.num_classes) {
            throw ConfigError("--grade out of range");
        }
    }
    std::vector<std::string> images;
    if (!image_path.empty()) {
        images.push_back(image_path);
    } else if (!manifest_path.empty()) {
        for (const auto& s : read_manifest(manifest_path).samples) {
            if (s.is_original()) images.push_back(s.path);
        }
    } else {
        throw ConfigError("explain: need --image or --manifest");
    }
    fs::create_directories(out_dir);
    std::vector<Stage> stage_list;
    {
        std::istringstream ss(stages);
        std::string tok;
        while (std::getline(ss, tok, ',')) stage_list.push_back(stage_from_string(tok));
    }
    for (const auto& path : images) {
        Image img = load_image(path);
        const std::string stem = fs::path(path).stem().string();
        if (stage_list.size() == 3) {
            fig6_panel(m, img, stem, out_dir, target);
        } else {
            auto input = image_to_tensor(
                rescale_image(img, m.config.input_size, m.config.input_size));
            int tg = target;
            if (tg < 0) {
                Tape tape;
                auto fwd = model_forward(tape, input, m, false, 0);
                tg = ops::argmax_rows(*fwd.logits)[0];
            }
            for (Stage st : stage_list) {
                Heatmap hm = grad_cam(m, input, tg, st);
                save_png((fs::path(out_dir) / (stem + "." + to_string(st) + ".png")).string(),
                         render_overlay(hm, img));
            }
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Diabetic-retinopathy grading with global and category attention"};
    app.require_subcommand(1);

    // preprocess
    auto* pp = app.add_subcommand("preprocess", "ingest, rescale, augment and split a dataset");
    std::string pp_input, pp_outdir, pp_manifest, pp_augment = "one-random",
                pp_split = "0.5,0.3,0.2";
    int pp_resize = 512;
    std::uint64_t pp_seed = 0;
    pp->add_option("--input-dir", pp_input, "directory with <grade>/<image> layout")
        ->required();
    pp->add_option("--out-dir", pp_outdir, "directory for processed images")->required();
    pp->add_option("--out-manifest", pp_manifest, "manifest CSV to write")->required();
    pp->add_option("--resize", pp_resize, "target square resolution");
    pp->add_option("--augment", pp_augment, "one-random|full|none");
    pp->add_option("--split", pp_split, "train,val,test fractions");
    pp->add_option("--seed", pp_seed, "root seed");

    // train
    auto* tr = app.add_subcommand("train", "train a model per the two-phase schedule");
    std::string tr_manifest, tr_outdir;
    TrainFlags tr_flags;
    tr->add_option("--manifest", tr_manifest, "dataset manifest CSV")->required();
    tr->add_option("--out-dir", tr_outdir, "output directory")->required();
    tr_flags.attach(tr);

    // eval
    auto* ev = app.add_subcommand("eval", "evaluate a checkpoint on a split");
    std::string ev_ckpt, ev_manifest, ev_split = "test", ev_out;
    ev->add_option("--ckpt", ev_ckpt, "checkpoint file")->required();
    ev->add_option("--manifest", ev_manifest, "dataset manifest CSV")->required();
    ev->add_option("--split", ev_split, "train|val|test");
    ev->add_option("--out", ev_out, "write report here instead of stdout");

    // ablate
    auto* ab = app.add_subcommand("ablate", "train and compare attention ablation arms");
    std::string ab_manifest, ab_outdir,
        ab_modes = "baseline,gab_only,cab_only,gab_cab";
    TrainFlags ab_flags;
    ab->add_option("--manifest", ab_manifest, "dataset manifest CSV")->required();
    ab->add_option("--out-dir", ab_outdir, "output directory")->required();
    ab->add_option("--modes", ab_modes, "comma-separated ablation modes");
    ab_flags.attach(ab);

    // explain
    auto* ex = app.add_subcommand("explain", "Grad-CAM overlays per attention stage");
    std::string ex_ckpt, ex_image, ex_manifest, ex_grade = "auto",
                ex_stages = "noattn,gab,cab", ex_outdir;
    ex->add_option("--ckpt", ex_ckpt, "checkpoint file")->required();
    ex->add_option("--image", ex_image, "single input image");
    ex->add_option("--manifest", ex_manifest, "manifest of images to explain");
    ex->add_option("--grade", ex_grade, "auto or 0..4");
    ex->add_option("--stages", ex_stages, "subset of noattn,gab,cab");
    ex->add_option("--out-dir", ex_outdir, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // prints usage, exit 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (pp->parsed()) {
            return run_preprocess(pp_input, pp_outdir, pp_manifest, pp_resize, pp_augment,
                                  pp_split, pp_seed);
        }
        if (tr->parsed()) return run_train(tr_flags, tr_manifest, tr_outdir);
        if (ev->parsed()) return run_eval(ev_ckpt, ev_manifest, ev_split, ev_out);
        if (ab->parsed()) return run_ablate(ab_flags, ab_manifest, ab_outdir, ab_modes);
        if (ex->parsed()) {
            return run_explain(ex_ckpt, ex_image, ex_manifest, ex_grade, ex_stages,
                               ex_outdir);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
