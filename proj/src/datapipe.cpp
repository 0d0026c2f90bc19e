#include "drgrade/datapipe.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "drgrade/rng.hpp"

namespace fs = std::filesystem;

namespace drg {

std::string to_string(Split s) {
    switch (s) {
        case Split::train: return "train";
        case Split::val: return "val";
        case Split::test: return "test";
    }
    return "?";
}

Split split_from_string(const std::string& s) {
    if (s == "train") return Split::train;
    if (s == "val") return Split::val;
    if (s == "test") return Split::test;
    throw ValidationError("unknown split: " + s);
}

std::string to_string(AugPolicy p) {
    switch (p) {
        case AugPolicy::none: return "none";
        case AugPolicy::one_random: return "one-random";
        case AugPolicy::full: return "full";
    }
    return "?";
}

AugPolicy aug_policy_from_string(const std::string& s) {
    if (s == "none") return AugPolicy::none;
    if (s == "one-random") return AugPolicy::one_random;
    if (s == "full") return AugPolicy::full;
    throw ValidationError("unknown augment policy: " + s);
}

std::string Sample::origin_stem() const {
    // <dir>/<stem>.<tag>.png -> <dir>/<stem>
    const std::string suffix = "." + aug_tag + ".png";
    if (path.size() > suffix.size() &&
        path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0) {
        return path.substr(0, path.size() - suffix.size());
    }
    return path;
}

Manifest read_manifest(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open manifest: " + path);
    Manifest m;
    m.source = path;
    std::string line;
    if (!std::getline(is, line) || line != "path,grade,split,aug_tag") {
        throw ValidationError("manifest missing required header line: " + path);
    }
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string p, g, sp, tag;
        if (!std::getline(ss, p, ',') || !std::getline(ss, g, ',') ||
            !std::getline(ss, sp, ',') || !std::getline(ss, tag)) {
            throw ValidationError("manifest line " + std::to_string(lineno) + " malformed");
        }
        Sample s;
        s.path = p;
        s.grade = std::stoi(g);
        if (s.grade < 0 || s.grade >= kNumGrades) {
            throw ValidationError("manifest line " + std::to_string(lineno) +
                                  ": grade out of range");
        }
        s.split = split_from_string(sp);
        s.aug_tag = tag;
        m.samples.push_back(std::move(s));
    }
    return m;
}

void write_manifest(const std::string& path, const Manifest& m) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot write manifest: " + path);
    os << "path,grade,split,aug_tag\n";
    for (const auto& s : m.samples) {
        os << s.path << ',' << s.grade << ',' << to_string(s.split) << ',' << s.aug_tag
           << '\n';
    }
}

ClassDistribution class_distribution(const Manifest& m) {
    ClassDistribution d;
    for (const auto& s : m.samples) {
        ++d.counts[s.grade];
        ++d.total;
    }
    for (int g = 0; g < kNumGrades; ++g) {
        d.fractions[g] = d.total > 0 ? static_cast<double>(d.counts[g]) / d.total : 0.0;
    }
    return d;
}

void split_dataset(Manifest& m, const std::array<double, 3>& fractions,
                   std::uint64_t seed) {
    const double fsum = fractions[0] + fractions[1] + fractions[2];
    if (std::abs(fsum - 1.0) > 1e-9) {
        throw ConfigError("split fractions must sum to 1");
    }
    // stable order first, then seeded per-class shuffle
    std::sort(m.samples.begin(), m.samples.end(),
              [](const Sample& a, const Sample& b) { return a.path < b.path; });
    std::array<std::vector<std::size_t>, kNumGrades> by_class;
    for (std::size_t i = 0; i < m.samples.size(); ++i) {
        if (m.samples[i].is_original()) by_class[m.samples[i].grade].push_back(i);
    }
    for (int g = 0; g < kNumGrades; ++g) {
        auto& idx = by_class[g];
        if (idx.empty()) continue;
        if (idx.size() < 3) {
            std::cerr << "warning: grade " << g << " has only " << idx.size()
                      << " samples; assigning all to train\n";
            for (auto i : idx) m.samples[i].split = Split::train;
            continue;
        }
        std::mt19937_64 rng(derive_seed(seed, "split", static_cast<std::uint64_t>(g)));
        std::shuffle(idx.begin(), idx.end(), rng);
        const std::size_t n = idx.size();
        // blocks assigned in train -> val -> test order; the trailing block
        // absorbs the floor remainder (7 @ 0.5/0.3/0.2 -> 3/2/2)
        std::array<std::size_t, 3> alloc = {
            static_cast<std::size_t>(std::floor(fractions[0] * n)),
            static_cast<std::size_t>(std::floor(fractions[1] * n)), 0};
        alloc[2] = n - alloc[0] - alloc[1];
        std::size_t pos = 0;
        const Split splits[3] = {Split::train, Split::val, Split::test};
        for (int s = 0; s < 3; ++s) {
            for (std::size_t j = 0; j < alloc[s]; ++j) {
                m.samples[idx[pos++]].split = splits[s];
            }
        }
    }
    // augmented records follow their originals
    std::map<std::string, Split> origin_split;
    for (const auto& s : m.samples) {
        if (s.is_original()) origin_split[s.origin_stem()] = s.split;
    }
    for (auto& s : m.samples) {
        if (!s.is_original()) {
            auto it = origin_split.find(s.origin_stem());
            if (it != origin_split.end()) s.split = it->second;
        }
    }
}

namespace {

constexpr AugOp kAllOps[4] = {AugOp::rot90, AugOp::rot180, AugOp::rot270, AugOp::hflip};

Sample augmented_record(const Sample& orig, AugOp op) {
    Sample s = orig;
    s.aug_tag = to_string(op);
    s.path = orig.origin_stem() + "." + s.aug_tag + ".png";
    return s;
}

}  // namespace

Manifest expand_dataset(const Manifest& m, AugPolicy policy, std::uint64_t seed) {
    Manifest out;
    out.source = m.source;
    for (const auto& s : m.samples) {
        out.samples.push_back(s);
        if (!s.is_original() || policy == AugPolicy::none) continue;
        if (policy == AugPolicy::full) {
            for (AugOp op : kAllOps) out.samples.push_back(augmented_record(s, op));
        } else {
            // keyed by filename, not the full path, so the choice survives a
            // change of output directory
            std::mt19937_64 rng(derive_seed(
                seed, "augment-" + fs::path(s.path).filename().string()));
            out.samples.push_back(
                augmented_record(s, kAllOps[rng() % 4]));
        }
    }
    return out;
}

Manifest preprocess_pipeline(const std::string& input_dir, const std::string& out_dir,
                             int resize, AugPolicy policy,
                             const std::array<double, 3>& fractions, std::uint64_t seed) {
    if (resize < 1) throw ConfigError("resize must be >= 1");
    if (!fs::is_directory(input_dir)) {
        throw IoError("input dir does not exist: " + input_dir);
    }
    fs::create_directories(out_dir);
    Manifest m;
    m.source = input_dir;
    std::vector<std::pair<std::string, int>> inputs;
    for (int g = 0; g < kNumGrades; ++g) {
        const fs::path dir = fs::path(input_dir) / std::to_string(g);
        if (!fs::is_directory(dir)) continue;
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (entry.is_regular_file()) inputs.emplace_back(entry.path().string(), g);
        }
    }
    std::sort(inputs.begin(), inputs.end());
    for (const auto& [src, grade] : inputs) {
        Image img = rescale_image(load_image(src), resize, resize);
        Sample s;
        s.grade = grade;
        s.path = (fs::path(out_dir) /
                  (fs::path(src).stem().string() + ".g" + std::to_string(grade) +
                   ".orig.png"))
                     .string();
        save_png(s.path, img);
        m.samples.push_back(std::move(s));
    }
    split_dataset(m, fractions, seed);
    Manifest expanded = expand_dataset(m, policy, seed);
    for (const auto& s : expanded.samples) {
        if (s.is_original()) continue;
        const std::string orig_path = s.origin_stem() + ".orig.png";
        Image img = load_image(orig_path);
        save_png(s.path, augment(img, aug_op_from_string(s.aug_tag)));
    }
    return expanded;
}

}  // namespace drg
