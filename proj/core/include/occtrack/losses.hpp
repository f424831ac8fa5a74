#pragma once

#include <vector>

#include "occtrack/box.hpp"

namespace occtrack {

/// Probabilities are clamped to [kProbClamp, 1 - kProbClamp] before any log.
inline constexpr double kProbClamp = 1e-7;

/// Classification batch: per-sample positive-class probabilities and binary
/// labels (1 target, 0 background/occluder).
struct ClsBatch {
    std::vector<double> predictions;
    std::vector<int> labels;

    void validate() const;
};

/// Regression batch: predicted and ground-truth boxes, index-aligned.
struct BoxBatch {
    std::vector<BoundingBox> predicted;
    std::vector<BoundingBox> truth;

    void validate() const;
};

struct LossWeights {
    double lambda_pos = 1.0;
    double lambda_neg = 1.0;
    double alpha = 1.0;
    double beta = 1.0;

    void validate() const;
};

/// Cross-entropy against label 1, summed over the positive-labeled entries.
double cls_loss_pos(const ClsBatch& batch);
/// Cross-entropy against label 0, summed over the negative-labeled entries.
double cls_loss_neg(const ClsBatch& batch);
/// lambda_neg * negative term + lambda_pos * positive term.
double cls_loss(const ClsBatch& batch, const LossWeights& w);
/// Sum of L1 distances between predicted and truth boxes over all four
/// coordinates.
double reg_loss(const BoxBatch& batch);
/// alpha * classification + beta * regression.
double total_loss(double cls, double reg, const LossWeights& w);
/// Occlusion-supervised variant: gamma 1 keeps only the weighted negative
/// term (frame judged occluded), gamma 0 keeps only the weighted positive
/// term.
double occlusion_cls_loss(const ClsBatch& batch, const LossWeights& w, int gamma);

/// Analytic d(loss)/d(prediction), one entry per sample. Entries whose
/// prediction sits outside the clamp interval get gradient 0 because the
/// clamped loss is flat there.
std::vector<double> cls_loss_pos_grad(const ClsBatch& batch);
std::vector<double> cls_loss_neg_grad(const ClsBatch& batch);
std::vector<double> cls_loss_grad(const ClsBatch& batch, const LossWeights& w);
std::vector<double> occlusion_cls_loss_grad(const ClsBatch& batch, const LossWeights& w, int gamma);

/// d(reg_loss)/d(predicted box), sign of the coordinate difference per field.
std::vector<BoundingBox> reg_loss_grad(const BoxBatch& batch);

}  // namespace occtrack
