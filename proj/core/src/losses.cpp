#include "occtrack/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace occtrack {

namespace {

double clamp_prob(double p) {
    return std::clamp(p, kProbClamp, 1.0 - kProbClamp);
}

bool in_clamp_interior(double p) {
    return p > kProbClamp && p < 1.0 - kProbClamp;
}

double sign(double x) {
    if (x > 0.0) return 1.0;
    if (x < 0.0) return -1.0;
    return 0.0;
}

void check_gamma(int gamma) {
    if (gamma != 0 && gamma != 1) throw std::invalid_argument("gamma must be 0 or 1");
}

}  // namespace

void ClsBatch::validate() const {
    if (predictions.size() != labels.size())
        throw std::invalid_argument("predictions and labels must have equal length");
    for (double p : predictions) {
        if (!std::isfinite(p)) throw std::invalid_argument("predictions must be finite");
    }
    for (int l : labels) {
        if (l != 0 && l != 1) throw std::invalid_argument("labels must be 0 or 1");
    }
}

void BoxBatch::validate() const {
    if (predicted.size() != truth.size())
        throw std::invalid_argument("predicted and truth boxes must have equal length");
    auto finite = [](const BoundingBox& b) {
        return std::isfinite(b.cx) && std::isfinite(b.cy) && std::isfinite(b.w) && std::isfinite(b.h);
    };
    for (const BoundingBox& b : predicted) {
        if (!finite(b)) throw std::invalid_argument("boxes must be finite");
    }
    for (const BoundingBox& b : truth) {
        if (!finite(b)) throw std::invalid_argument("boxes must be finite");
        if (!(b.w > 0.0 && b.h > 0.0)) throw std::invalid_argument("truth boxes need positive extent");
    }
}

void LossWeights::validate() const {
    if (!(lambda_pos >= 0.0 && lambda_neg >= 0.0 && alpha >= 0.0 && beta >= 0.0))
        throw std::invalid_argument("loss weights must be non-negative");
}

double cls_loss_pos(const ClsBatch& batch) {
    batch.validate();
    double sum = 0.0;
    for (size_t i = 0; i < batch.predictions.size(); ++i) {
        if (batch.labels[i] == 1) sum -= std::log(clamp_prob(batch.predictions[i]));
    }
    return sum;
}

double cls_loss_neg(const ClsBatch& batch) {
    batch.validate();
    double sum = 0.0;
    for (size_t i = 0; i < batch.predictions.size(); ++i) {
        if (batch.labels[i] == 0) sum -= std::log(1.0 - clamp_prob(batch.predictions[i]));
    }
    return sum;
}

double cls_loss(const ClsBatch& batch, const LossWeights& w) {
    w.validate();
    return w.lambda_neg * cls_loss_neg(batch) + w.lambda_pos * cls_loss_pos(batch);
}

double reg_loss(const BoxBatch& batch) {
    batch.validate();
    double sum = 0.0;
    for (size_t i = 0; i < batch.predicted.size(); ++i) {
        const BoundingBox& p = batch.predicted[i];
        const BoundingBox& t = batch.truth[i];
        sum += std::abs(p.cx - t.cx) + std::abs(p.cy - t.cy) + std::abs(p.w - t.w) +
               std::abs(p.h - t.h);
    }
    return sum;
}

double total_loss(double cls, double reg, const LossWeights& w) {
    w.validate();
    if (!std::isfinite(cls) || !std::isfinite(reg))
        throw std::invalid_argument("loss terms must be finite");
    return w.alpha * cls + w.beta * reg;
}

double occlusion_cls_loss(const ClsBatch& batch, const LossWeights& w, int gamma) {
    check_gamma(gamma);
    w.validate();
    return gamma == 1 ? w.lambda_neg * cls_loss_neg(batch) : w.lambda_pos * cls_loss_pos(batch);
}

std::vector<double> cls_loss_pos_grad(const ClsBatch& batch) {
    batch.validate();
    std::vector<double> grad(batch.predictions.size(), 0.0);
    for (size_t i = 0; i < grad.size(); ++i) {
        const double p = batch.predictions[i];
        if (batch.labels[i] == 1 && in_clamp_interior(p)) grad[i] = -1.0 / p;
    }
    return grad;
}

std::vector<double> cls_loss_neg_grad(const ClsBatch& batch) {
    batch.validate();
    std::vector<double> grad(batch.predictions.size(), 0.0);
    for (size_t i = 0; i < grad.size(); ++i) {
        const double p = batch.predictions[i];
        if (batch.labels[i] == 0 && in_clamp_interior(p)) grad[i] = 1.0 / (1.0 - p);
    }
    return grad;
}

std::vector<double> cls_loss_grad(const ClsBatch& batch, const LossWeights& w) {
    w.validate();
    std::vector<double> grad = cls_loss_neg_grad(batch);
    const std::vector<double> pos = cls_loss_pos_grad(batch);
    for (size_t i = 0; i < grad.size(); ++i) grad[i] = w.lambda_neg * grad[i] + w.lambda_pos * pos[i];
    return grad;
}

std::vector<double> occlusion_cls_loss_grad(const ClsBatch& batch, const LossWeights& w, int gamma) {
    check_gamma(gamma);
    w.validate();
    std::vector<double> grad = gamma == 1 ? cls_loss_neg_grad(batch) : cls_loss_pos_grad(batch);
    const double scale = gamma == 1 ? w.lambda_neg : w.lambda_pos;
    for (double& g : grad) g *= scale;
    return grad;
}

std::vector<BoundingBox> reg_loss_grad(const BoxBatch& batch) {
    batch.validate();
    std::vector<BoundingBox> grad(batch.predicted.size());
    for (size_t i = 0; i < grad.size(); ++i) {
        const BoundingBox& p = batch.predicted[i];
        const BoundingBox& t = batch.truth[i];
        grad[i] = {sign(p.cx - t.cx), sign(p.cy - t.cy), sign(p.w - t.w), sign(p.h - t.h)};
    }
    return grad;
}

}  // namespace occtrack
