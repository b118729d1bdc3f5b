#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gaze360/attended.hpp"
#include "gaze360/types.hpp"

namespace gaze360 {

// Binary grid with 1 at fixated pixels; NSS needs at least one 1.
struct FixationPointMap {
    ByteGrid fixated;
};

inline constexpr double kKldEpsilon = 1e-7;
inline constexpr double kNormalizationTolerance = 1e-4;

// sum_i P(i) * log(P(i) / (Q(i) + eps) + eps), natural log, zero-P terms
// contribute nothing. Both grids must sum to 1 within 1e-4 (NotNormalized).
// With eps == 0 the value may be +infinity when Q vanishes where P does not.
double kld(const FloatGrid& p_gt, const FloatGrid& p_pred, double eps = kKldEpsilon);

// Pearson correlation over all pixels, population statistics. Returns a
// value in [-1, 1]; throws ZeroVariance when either grid is constant.
double cc(const FloatGrid& x, const FloatGrid& y);

// Mean of the z-score-normalized prediction at fixated pixels. A constant
// prediction returns 0 by convention; throws NoFixations when the fixation
// map is empty.
double nss(const FloatGrid& pred, const FixationPointMap& fix);

// Histogram intersection sum_i min(P(i), Q(i)); both grids must sum to 1
// within 1e-4.
double sim(const FloatGrid& p_gt, const FloatGrid& p_pred);

struct ClassOverlap {
    uint16_t class_id = 0;
    double dice = 0.0;
    double iou = 0.0;
};

// Per-class overlap for every nonbackground class present in the ground
// truth. Throws EmptyGroundTruth when the ground truth is all background.
std::vector<ClassOverlap> segmentation_overlap(const SemanticMask& gt, const SemanticMask& pred);

// Macro averages of the per-class scores, background excluded.
double dice(const SemanticMask& gt, const SemanticMask& pred);
double iou(const SemanticMask& gt, const SemanticMask& pred);

// Attention loss: KLD(P_gt, P_pred) - CC(gt, pred).
double loss_sal(const FloatGrid& x_sal, const FloatGrid& y_sal);

// Per-pixel class probabilities, pixel-major: prob(x, y, c) =
// values[(y * width + x) * num_classes + c].
struct ProbGrid {
    int width = 0;
    int height = 0;
    int num_classes = 0;
    std::vector<double> values;

    double at(int x, int y, int c) const {
        return values[(static_cast<size_t>(y) * width + x) * num_classes + c];
    }
};

// Segmentation loss: -Dice(X, argmax Y) - IoU(X, argmax Y) + CE(X, Y) with
// pixel-mean cross-entropy and log probabilities clamped at 1e-12. Every
// pixel's probability vector must sum to 1 within 1e-5 (NotAProbability);
// argmax ties resolve to the lowest class id.
double loss_seg(const SemanticMask& x_seg, const ProbGrid& y_prob);

// lambda_sal * L_sal + lambda_seg * L_seg.
double loss_total(const FloatGrid& x_sal, const FloatGrid& y_sal, const SemanticMask& x_seg,
                  const ProbGrid& y_prob, double lambda_sal = 1.0, double lambda_seg = 1.0);

// One evaluated frame. Metrics that did not apply (missing inputs) or could
// not be computed stay unset; `valid` means every requested metric computed.
struct FrameEval {
    std::string frame_id;
    bool valid = false;
    std::string skip_reason;
    std::optional<double> kld, cc, nss, sim, dice, iou;
};

struct EvalReport {
    std::vector<FrameEval> frames;
    int valid_count = 0;
    int skip_count = 0;
    // Arithmetic means over valid frames; unset when no valid frame supplied
    // the metric.
    std::optional<double> mean_kld, mean_cc, mean_nss, mean_sim, mean_dice, mean_iou;

    // Recomputes counts and means from `frames`.
    void finalize();
};

}  // namespace gaze360
