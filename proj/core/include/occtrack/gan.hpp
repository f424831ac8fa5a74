#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "occtrack/seqnet.hpp"
#include "occtrack/trajectory.hpp"

namespace occtrack {

struct GanTrainConfig {
    int hidden = 32;
    int noise_dim = 8;
    double lr_g = 0.02;
    double lr_d = 0.1;
    double momentum = 0.5;
    int batch_size = 96;
    int steps = 2000;
    /// Discriminator updates per generator update.
    int d_steps_per_g = 2;
    int t_obs = 4;
    int n_pred = 2;
    double field_size = 100.0;
    uint64_t seed = 1;
    /// Stddev (px) of Gaussian perturbation added to every point the
    /// discriminator trains on, real and generated alike. Exact trajectories
    /// occupy a measure-zero set, so an unsmoothed discriminator saturates and
    /// stops carrying a usable gradient; the perturbation keeps the two input
    /// distributions overlapping. Zero disables it. Generator updates and
    /// evaluation always see clean trajectories.
    double input_noise = 0.3;

    void validate() const;
};

/// Generator/discriminator pair plus the horizon metadata needed to use the
/// generator inside the tracker.
struct GanModel {
    SeqNetParams generator;
    SeqNetParams discriminator;
    int t_obs = 4;
    int n_pred = 2;
    double field_size = 100.0;
};

struct GanTrainLog {
    /// One entry per discriminator update and per generator update.
    std::vector<double> d_loss;
    std::vector<double> g_loss;
};

struct TrainedGan {
    GanModel model;
    GanTrainLog log;
};

/// Alternating SGD-with-momentum on the adversarial objective. Every split
/// must have exactly t_obs observed and n_pred future points. Deterministic
/// given cfg.seed; zero learning rates leave the initialization untouched.
TrainedGan train_gan(const std::vector<TrajSplit>& data, const GanTrainConfig& cfg);

/// Mean ADE of the generator over evaluation splits, one noise draw per
/// split from a stream seeded with noise_seed.
double evaluate_ade(const SeqNetParams& generator, const std::vector<TrajSplit>& eval,
                    const GenConfig& cfg, uint64_t noise_seed);

struct ObsLengthRow {
    int t_obs = 0;
    int sample_count = 0;
    double mean_ade = 0.0;
};

/// Trains one model per observation length on sliding windows from the
/// training portion (trajectory indices not congruent to 4 mod 5) and reports
/// held-out mean ADE per length. Needs at least five trajectories, each long
/// enough for the largest window.
std::vector<ObsLengthRow> observation_length_study(const std::vector<Trajectory>& trajectories,
                                                   const std::vector<int>& lengths,
                                                   const GanTrainConfig& base);

void write_study_csv(std::ostream& out, const std::vector<ObsLengthRow>& rows);

/// Sliding windows of t_obs + n_pred consecutive points, stride 1, over every
/// trajectory long enough to contain at least one.
std::vector<TrajSplit> make_splits(const std::vector<Trajectory>& trajectories, int t_obs,
                                   int n_pred);

/// Binary model file: little-endian uint32 header length, JSON shape header,
/// then the two parameter vectors as little-endian doubles.
void save_gan_model(const std::string& path, const GanModel& model);
GanModel load_gan_model(const std::string& path);

}  // namespace occtrack
