#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "drgrade/tensor.hpp"

namespace drg {

// L x L agreement matrix; rows = true grade, columns = predicted grade.
struct ConfusionMatrix {
    int L = 0;
    std::vector<std::int64_t> counts;  // row-major L*L

    ConfusionMatrix() = default;
    explicit ConfusionMatrix(int L_) : L(L_), counts(static_cast<std::size_t>(L_) * L_, 0) {}

    std::int64_t& at(int t, int p) { return counts[static_cast<std::size_t>(t) * L + p]; }
    std::int64_t at(int t, int p) const { return counts[static_cast<std::size_t>(t) * L + p]; }
    std::int64_t total() const;
    ConfusionMatrix& operator+=(const ConfusionMatrix& other);
};

ConfusionMatrix confusion_from_predictions(const std::vector<int>& truths,
                                           const std::vector<int>& preds, int L);

struct BinaryCounts {
    std::int64_t tp = 0, fp = 0, tn = 0, fn = 0;
};
// one-vs-rest reduction for class i
BinaryCounts binary_counts(const ConfusionMatrix& cm, int i);

// trace / total
double accuracy(const ConfusionMatrix& cm);
// Per-class one-vs-rest metrics. A zero denominator yields 0; callers needing
// the degenerate flag use the report.
double sensitivity(const ConfusionMatrix& cm, int i);
double specificity(const ConfusionMatrix& cm, int i);
double precision(const ConfusionMatrix& cm, int i);
double f1(const ConfusionMatrix& cm, int i);  // TP / (TP + (FN+FP)/2)

// Cohen's kappa with quadratic weights W[i][j] = (i-j)^2/(L-1)^2.
// Throws ValidationError when every truth and prediction is a single class.
double quadratic_weighted_kappa(const ConfusionMatrix& cm);

struct MetricsReport {
    double accuracy = 0.0;
    double f1_macro = 0.0, precision_macro = 0.0;
    double sensitivity_macro = 0.0, specificity_macro = 0.0;
    double f1_micro = 0.0, precision_micro = 0.0;
    double sensitivity_micro = 0.0, specificity_micro = 0.0;
    double kappa_qwk = 0.0;
    bool kappa_defined = true;
    struct PerClass {
        double precision = 0.0, sensitivity = 0.0, specificity = 0.0, f1 = 0.0;
        bool degenerate = false;  // some denominator was zero
    };
    std::vector<PerClass> per_class;
    ConfusionMatrix cm;
};

MetricsReport compute_report(const ConfusionMatrix& cm);
std::string report_to_text(const MetricsReport& r);

}  // namespace drg
