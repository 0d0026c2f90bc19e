#include "drgrade/metrics.hpp"

#include <cstdio>
#include <numeric>
#include <sstream>

namespace drg {

std::int64_t ConfusionMatrix::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
    if (other.L != L) throw ValidationError("confusion matrix size mismatch");
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
    return *this;
}

ConfusionMatrix confusion_from_predictions(const std::vector<int>& truths,
                                           const std::vector<int>& preds, int L) {
    if (truths.size() != preds.size()) {
        throw ValidationError("confusion: truth/prediction count mismatch");
    }
    ConfusionMatrix cm(L);
    for (std::size_t i = 0; i < truths.size(); ++i) {
        if (truths[i] < 0 || truths[i] >= L || preds[i] < 0 || preds[i] >= L) {
            throw ValidationError("confusion: grade out of range at index " +
                                  std::to_string(i));
        }
        ++cm.at(truths[i], preds[i]);
    }
    return cm;
}

BinaryCounts binary_counts(const ConfusionMatrix& cm, int i) {
    if (i < 0 || i >= cm.L) throw ValidationError("binary_counts: class out of range");
    BinaryCounts b;
    b.tp = cm.at(i, i);
    for (int j = 0; j < cm.L; ++j) {
        if (j == i) continue;
        b.fn += cm.at(i, j);
        b.fp += cm.at(j, i);
    }
    b.tn = cm.total() - b.tp - b.fp - b.fn;
    return b;
}

namespace {
double ratio(std::int64_t num, std::int64_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}
}  // namespace

double accuracy(const ConfusionMatrix& cm) {
    std::int64_t trace = 0;
    for (int i = 0; i < cm.L; ++i) trace += cm.at(i, i);
    return ratio(trace, cm.total());
}

double sensitivity(const ConfusionMatrix& cm, int i) {
    const auto b = binary_counts(cm, i);
    return ratio(b.tp, b.tp + b.fn);
}

double specificity(const ConfusionMatrix& cm, int i) {
    const auto b = binary_counts(cm, i);
    return ratio(b.tn, b.tn + b.fp);
}

double precision(const ConfusionMatrix& cm, int i) {
    const auto b = binary_counts(cm, i);
    return ratio(b.tp, b.tp + b.fp);
}

double f1(const ConfusionMatrix& cm, int i) {
    const auto b = binary_counts(cm, i);
    const double den = static_cast<double>(b.tp) + 0.5 * static_cast<double>(b.fn + b.fp);
    return den == 0.0 ? 0.0 : static_cast<double>(b.tp) / den;
}

double quadratic_weighted_kappa(const ConfusionMatrix& cm) {
    const std::int64_t total = cm.total();
    if (total <= 0) throw ValidationError("kappa: empty confusion matrix");
    const int L = cm.L;
    std::vector<double> row(L, 0.0), col(L, 0.0);
    for (int i = 0; i < L; ++i) {
        for (int j = 0; j < L; ++j) {
            row[i] += static_cast<double>(cm.at(i, j)) / total;
            col[j] += static_cast<double>(cm.at(i, j)) / total;
        }
    }
    const double denom_w = static_cast<double>(L - 1) * (L - 1);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < L; ++i) {
        for (int j = 0; j < L; ++j) {
            const double w = static_cast<double>(i - j) * (i - j) / denom_w;
            num += w * static_cast<double>(cm.at(i, j)) / total;
            den += w * row[i] * col[j];
        }
    }
    if (den == 0.0) {
        throw ValidationError("kappa undefined: single class in truths and predictions");
    }
    return 1.0 - num / den;
}

MetricsReport compute_report(const ConfusionMatrix& cm) {
    MetricsReport r;
    r.cm = cm;
    r.accuracy = accuracy(cm);
    BinaryCounts sum;
    for (int i = 0; i < cm.L; ++i) {
        const auto b = binary_counts(cm, i);
        MetricsReport::PerClass pc;
        pc.sensitivity = sensitivity(cm, i);
        pc.specificity = specificity(cm, i);
        pc.precision = precision(cm, i);
        pc.f1 = f1(cm, i);
        pc.degenerate = (b.tp + b.fn == 0) || (b.tn + b.fp == 0) || (b.tp + b.fp == 0);
        r.per_class.push_back(pc);
        r.sensitivity_macro += pc.sensitivity;
        r.specificity_macro += pc.specificity;
        r.precision_macro += pc.precision;
        r.f1_macro += pc.f1;
        sum.tp += b.tp;
        sum.fp += b.fp;
        sum.tn += b.tn;
        sum.fn += b.fn;
    }
    r.sensitivity_macro /= cm.L;
    r.specificity_macro /= cm.L;
    r.precision_macro /= cm.L;
    r.f1_macro /= cm.L;
    r.sensitivity_micro = ratio(sum.tp, sum.tp + sum.fn);
    r.specificity_micro = ratio(sum.tn, sum.tn + sum.fp);
    r.precision_micro = ratio(sum.tp, sum.tp + sum.fp);
    {
        const double den = static_cast<double>(sum.tp) + 0.5 * static_cast<double>(sum.fn + sum.fp);
        r.f1_micro = den == 0.0 ? 0.0 : static_cast<double>(sum.tp) / den;
    }
    try {
        r.kappa_qwk = quadratic_weighted_kappa(cm);
    } catch (const ValidationError&) {
        r.kappa_qwk = 0.0;
        r.kappa_defined = false;
    }
    return r;
}

namespace {
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}
}  // namespace

std::string report_to_text(const MetricsReport& r) {
    std::ostringstream os;
    os << "accuracy = " << fmt(r.accuracy) << '\n';
    os << "f1_macro = " << fmt(r.f1_macro) << '\n';
    os << "precision_macro = " << fmt(r.precision_macro) << '\n';
    os << "sensitivity_macro = " << fmt(r.sensitivity_macro) << '\n';
    os << "specificity_macro = " << fmt(r.specificity_macro) << '\n';
    os << "f1_micro = " << fmt(r.f1_micro) << '\n';
    os << "precision_micro = " << fmt(r.precision_micro) << '\n';
    os << "sensitivity_micro = " << fmt(r.sensitivity_micro) << '\n';
    os << "specificity_micro = " << fmt(r.specificity_micro) << '\n';
    os << "kappa_qwk = " << fmt(r.kappa_qwk) << '\n';
    os << "kappa_defined = " << (r.kappa_defined ? 1 : 0) << '\n';
    for (int i = 0; i < static_cast<int>(r.per_class.size()); ++i) {
        const auto& pc = r.per_class[i];
        os << "per_class." << i << ".precision = " << fmt(pc.precision) << '\n';
        os << "per_class." << i << ".sensitivity = " << fmt(pc.sensitivity) << '\n';
        os << "per_class." << i << ".specificity = " << fmt(pc.specificity) << '\n';
        os << "per_class." << i << ".f1 = " << fmt(pc.f1) << '\n';
        os << "per_class." << i << ".degenerate = " << (pc.degenerate ? 1 : 0) << '\n';
    }
    os << "confusion_matrix = ";
    for (int i = 0; i < r.cm.L; ++i) {
        if (i > 0) os << "; ";
        for (int j = 0; j < r.cm.L; ++j) {
            if (j > 0) os << ' ';
            os << r.cm.at(i, j);
        }
    }
    os << '\n';
    return os.str();
}

}  // namespace drg
