#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "occtrack/trajectory.hpp"

namespace occtrack {

enum class NetRole { kGenerator, kDiscriminator };

/// Parameters of one single-layer gated recurrent net over 2-D displacement
/// steps. Everything lives in one flat vector; the layout is fixed by
/// (role, hidden, noise_dim) so blobs serialize directly and gradient checks
/// can perturb single entries.
///
/// Layout, in order: input embedding W_e (hidden x 2) and b_e, gate weights
/// W_x (4*hidden x hidden), W_h (4*hidden x hidden) and bias (4*hidden) with
/// gate rows ordered input/forget/output/candidate, noise injection W_z
/// (hidden x noise_dim, generator only), output head W_o (out x hidden) and
/// b_o, where out is 2 for the generator and 1 for the discriminator.
struct SeqNetParams {
    NetRole role = NetRole::kGenerator;
    int hidden = 32;
    int noise_dim = 8;
    std::vector<double> flat;

    int input_dim() const { return 2; }
    int output_dim() const { return role == NetRole::kGenerator ? 2 : 1; }
    size_t count() const;
    void validate() const;

    static SeqNetParams zeros(NetRole role, int hidden, int noise_dim);
    /// All entries drawn uniformly from (-1/sqrt(hidden), 1/sqrt(hidden)).
    static SeqNetParams random_init(NetRole role, int hidden, int noise_dim, std::mt19937_64& rng);
};

struct GenConfig {
    int n_pred = 2;
    /// Field extent used to normalize displacement steps into roughly [-1, 1].
    double field_size = 100.0;

    void validate() const;
};

/// Rolls the net over the observed displacement history, injects the noise
/// vector into the hidden state, then unrolls n_pred steps feeding each
/// predicted displacement back as the next input. Outputs absolute points
/// continuing the observed trajectory; with all-zero parameters every output
/// repeats the last observed point. Works on displacements only, so a
/// translated input yields an exactly translated output.
Trajectory generator_forward(const SeqNetParams& g, const Trajectory& observed,
                             const std::vector<double>& noise, const GenConfig& cfg);

/// Probability in (0, 1) that the trajectory is a real continuation. Rolls
/// the net over all displacement steps and applies a sigmoid head to the
/// final hidden state. Needs at least two points.
double discriminator_forward(const SeqNetParams& d, const Trajectory& traj, double field_size);

struct GanLossValue {
    double g_loss = 0.0;
    double d_loss = 0.0;
};

/// Adversarial losses from discriminator outputs on real and generated
/// batches, probabilities clamped before the logs. d_loss is the mean
/// cross-entropy of real-vs-fake; g_loss is the non-saturating generator
/// objective -mean log D(fake).
GanLossValue gan_loss(const std::vector<double>& d_real, const std::vector<double>& d_fake);

struct GanLossGrad {
    std::vector<double> d_loss_wrt_real;
    std::vector<double> d_loss_wrt_fake;
    std::vector<double> g_loss_wrt_fake;
};

/// Analytic gradients of gan_loss with respect to its probability inputs.
/// Inputs outside the clamp interval get gradient 0.
GanLossGrad gan_loss_grad(const std::vector<double>& d_real, const std::vector<double>& d_fake);

/// d_loss over a batch with its full parameter gradient. grad is resized and
/// overwritten.
double discriminator_batch_grad(const SeqNetParams& d, const std::vector<Trajectory>& real,
                                const std::vector<Trajectory>& fake, double field_size,
                                std::vector<double>& grad);

/// g_loss over a batch with its full parameter gradient, backpropagated
/// through the (fixed) discriminator into the generator. The fake
/// trajectories scored by the discriminator are observed ++ generated; they
/// are exposed through fakes when non-null.
double generator_batch_grad(const SeqNetParams& g, const SeqNetParams& d,
                            const std::vector<Trajectory>& observed,
                            const std::vector<std::vector<double>>& noises, const GenConfig& cfg,
                            std::vector<double>& grad, std::vector<Trajectory>* fakes = nullptr);

/// observed ++ generated, reused by trainer and evaluation.
Trajectory concat_trajectory(const Trajectory& observed, const Trajectory& generated);

}  // namespace occtrack
