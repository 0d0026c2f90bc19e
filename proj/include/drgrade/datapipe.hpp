#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "drgrade/image.hpp"

namespace drg {

inline constexpr int kNumGrades = 5;  // DR0 none .. DR4 proliferative

enum class Split { train, val, test };
std::string to_string(Split s);
Split split_from_string(const std::string& s);

enum class AugPolicy { none, one_random, full };
std::string to_string(AugPolicy p);
AugPolicy aug_policy_from_string(const std::string& s);

struct Sample {
    std::string path;
    int grade = 0;              // 0..4
    Split split = Split::train;
    std::string aug_tag = "orig";  // orig | rot90 | rot180 | rot270 | hflip

    bool is_original() const { return aug_tag == "orig"; }
    // Originals are their own origin; augmented samples share the stem of the
    // original they were derived from.
    std::string origin_stem() const;
};

struct Manifest {
    std::string source;
    std::vector<Sample> samples;
};

// CSV with required header line: path,grade,split,aug_tag
Manifest read_manifest(const std::string& path);
void write_manifest(const std::string& path, const Manifest& m);

struct ClassDistribution {
    std::array<std::int64_t, kNumGrades> counts{};
    std::array<double, kNumGrades> fractions{};
    std::int64_t total = 0;
};
ClassDistribution class_distribution(const Manifest& m);

// Stratified per grade over original samples: floor-allocated counts, the
// remainder assigned train -> val -> test. A class with fewer than 3 samples
// goes entirely to train (with a warning on stderr). Augmented samples always
// inherit their original's split.
void split_dataset(Manifest& m, const std::array<double, 3>& fractions,
                   std::uint64_t seed);

// one_random: each original gains one seeded-uniform augmented variant (2x);
// full: all four variants (5x). Augmented records inherit grade and split.
Manifest expand_dataset(const Manifest& m, AugPolicy policy, std::uint64_t seed);

// Scans input_dir/<grade>/<image> (grade directories "0".."4"), rescales each
// image, writes <stem>.orig.png plus any augmented variants into out_dir, and
// returns the split, expanded manifest. Deterministic: samples sorted by path.
Manifest preprocess_pipeline(const std::string& input_dir, const std::string& out_dir,
                             int resize, AugPolicy policy,
                             const std::array<double, 3>& fractions, std::uint64_t seed);

}  // namespace drg
