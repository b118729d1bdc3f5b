#include "gaze360/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace gaze360 {

namespace {

double grid_sum(const FloatGrid& g) {
    double s = 0.0;
    for (double v : g.values) s += v;
    return s;
}

void require_normalized(const FloatGrid& g, const char* which) {
    if (std::abs(grid_sum(g) - 1.0) > kNormalizationTolerance)
        fail(ErrorCode::NotNormalized, std::string(which) + " map does not sum to 1");
}

struct Moments {
    double mean;
    double stddev;  // population
};

Moments moments(const FloatGrid& g) {
    double mean = 0.0;
    for (double v : g.values) mean += v;
    mean /= static_cast<double>(g.size());
    double var = 0.0;
    for (double v : g.values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(g.size());
    return {mean, std::sqrt(var)};
}

}  // namespace

double kld(const FloatGrid& p_gt, const FloatGrid& p_pred, double eps) {
    require_same_shape(p_gt, p_pred);
    require_normalized(p_gt, "ground-truth");
    require_normalized(p_pred, "predicted");
    double total = 0.0;
    for (size_t i = 0; i < p_gt.values.size(); ++i) {
        const double p = p_gt.values[i];
        if (p == 0.0) continue;
        total += p * std::log(p / (p_pred.values[i] + eps) + eps);
    }
    return total;
}

double cc(const FloatGrid& x, const FloatGrid& y) {
    require_same_shape(x, y);
    const Moments mx = moments(x);
    const Moments my = moments(y);
    if (mx.stddev == 0.0 || my.stddev == 0.0) fail(ErrorCode::ZeroVariance, "correlation of a constant map");
    double cov = 0.0;
    for (size_t i = 0; i < x.values.size(); ++i) cov += (x.values[i] - mx.mean) * (y.values[i] - my.mean);
    cov /= static_cast<double>(x.size());
    // Pearson correlation spans [-1, 1]; anticorrelated maps do yield
    // negative values.
    return cov / (mx.stddev * my.stddev);
}

double nss(const FloatGrid& pred, const FixationPointMap& fix) {
    require_same_shape(pred, fix.fixated);
    size_t n = 0;
    for (uint8_t v : fix.fixated.values) n += v ? 1 : 0;
    if (n == 0) fail(ErrorCode::NoFixations, "fixation point map has no fixated pixel");

    const Moments m = moments(pred);
    if (m.stddev == 0.0) return 0.0;
    double total = 0.0;
    for (size_t i = 0; i < pred.values.size(); ++i)
        if (fix.fixated.values[i]) total += (pred.values[i] - m.mean) / m.stddev;
    return total / static_cast<double>(n);
}

double sim(const FloatGrid& p_gt, const FloatGrid& p_pred) {
    require_same_shape(p_gt, p_pred);
    require_normalized(p_gt, "ground-truth");
    require_normalized(p_pred, "predicted");
    double total = 0.0;
    for (size_t i = 0; i < p_gt.values.size(); ++i) total += std::min(p_gt.values[i], p_pred.values[i]);
    return total;
}

std::vector<ClassOverlap> segmentation_overlap(const SemanticMask& gt, const SemanticMask& pred) {
    require_same_shape(gt.class_ids, pred.class_ids);

    std::map<uint16_t, size_t> gt_count, pred_count, inter_count;
    for (size_t i = 0; i < gt.class_ids.values.size(); ++i) {
        const uint16_t g = gt.class_ids.values[i];
        const uint16_t p = pred.class_ids.values[i];
        if (g != 0) ++gt_count[g];
        if (p != 0) ++pred_count[p];
        if (g != 0 && g == p) ++inter_count[g];
    }
    if (gt_count.empty()) fail(ErrorCode::EmptyGroundTruth, "ground-truth mask has no nonbackground class");

    std::vector<ClassOverlap> out;
    for (const auto& [cls, gt_n] : gt_count) {
        const size_t pred_n = pred_count.count(cls) ? pred_count.at(cls) : 0;
        const size_t inter = inter_count.count(cls) ? inter_count.at(cls) : 0;
        ClassOverlap o;
        o.class_id = cls;
        o.dice = 2.0 * static_cast<double>(inter) / static_cast<double>(gt_n + pred_n);
        o.iou = static_cast<double>(inter) / static_cast<double>(gt_n + pred_n - inter);
        out.push_back(o);
    }
    return out;
}

double dice(const SemanticMask& gt, const SemanticMask& pred) {
    const auto per_class = segmentation_overlap(gt, pred);
    double total = 0.0;
    for (const auto& o : per_class) total += o.dice;
    return total / static_cast<double>(per_class.size());
}

double iou(const SemanticMask& gt, const SemanticMask& pred) {
    const auto per_class = segmentation_overlap(gt, pred);
    double total = 0.0;
    for (const auto& o : per_class) total += o.iou;
    return total / static_cast<double>(per_class.size());
}

double loss_sal(const FloatGrid& x_sal, const FloatGrid& y_sal) { return kld(x_sal, y_sal) - cc(x_sal, y_sal); }

namespace {

SemanticMask argmax_classes(const ProbGrid& prob) {
    SemanticMask mask;
    mask.class_ids = IdGrid(prob.width, prob.height, 0);
    for (int y = 0; y < prob.height; ++y) {
        for (int x = 0; x < prob.width; ++x) {
            int best = 0;
            double best_p = prob.at(x, y, 0);
            for (int c = 1; c < prob.num_classes; ++c) {
                const double p = prob.at(x, y, c);
                if (p > best_p) {
                    best_p = p;
                    best = c;
                }
            }
            mask.class_ids.at(x, y) = static_cast<uint16_t>(best);
        }
    }
    return mask;
}

}  // namespace

double loss_seg(const SemanticMask& x_seg, const ProbGrid& y_prob) {
    if (x_seg.class_ids.width != y_prob.width || x_seg.class_ids.height != y_prob.height)
        fail(ErrorCode::ShapeMismatch, "mask and probability grid dimensions differ");
    if (y_prob.num_classes < 1) fail(ErrorCode::ShapeMismatch, "probability grid has no classes");

    constexpr double kLogClamp = 1e-12;
    double ce = 0.0;
    for (int y = 0; y < y_prob.height; ++y) {
        for (int x = 0; x < y_prob.width; ++x) {
            double row_sum = 0.0;
            for (int c = 0; c < y_prob.num_classes; ++c) row_sum += y_prob.at(x, y, c);
            if (std::abs(row_sum - 1.0) > 1e-5)
                fail(ErrorCode::NotAProbability, "pixel probability vector does not sum to 1");
            const uint16_t truth = x_seg.class_ids.at(x, y);
            if (truth >= y_prob.num_classes)
                fail(ErrorCode::ShapeMismatch, "ground-truth class id exceeds probability channels");
            ce += -std::log(std::max(y_prob.at(x, y, truth), kLogClamp));
        }
    }
    ce /= static_cast<double>(y_prob.width) * y_prob.height;

    const SemanticMask pred = argmax_classes(y_prob);
    return -dice(x_seg, pred) - iou(x_seg, pred) + ce;
}

double loss_total(const FloatGrid& x_sal, const FloatGrid& y_sal, const SemanticMask& x_seg,
                  const ProbGrid& y_prob, double lambda_sal, double lambda_seg) {
    return lambda_sal * loss_sal(x_sal, y_sal) + lambda_seg * loss_seg(x_seg, y_prob);
}

void EvalReport::finalize() {
    valid_count = 0;
    skip_count = 0;
    struct Acc {
        double sum = 0.0;
        int n = 0;
        void add(const std::optional<double>& v) {
            if (v) {
                sum += *v;
                ++n;
            }
        }
        std::optional<double> mean() const {
            if (n == 0) return std::nullopt;
            return sum / n;
        }
    };
    Acc a_kld, a_cc, a_nss, a_sim, a_dice, a_iou;
    for (const auto& f : frames) {
        if (!f.valid) {
            ++skip_count;
            continue;
        }
        ++valid_count;
        a_kld.add(f.kld);
        a_cc.add(f.cc);
        a_nss.add(f.nss);
        a_sim.add(f.sim);
        a_dice.add(f.dice);
        a_iou.add(f.iou);
    }
    mean_kld = a_kld.mean();
    mean_cc = a_cc.mean();
    mean_nss = a_nss.mean();
    mean_sim = a_sim.mean();
    mean_dice = a_dice.mean();
    mean_iou = a_iou.mean();
}

}  // namespace gaze360
