#include "occtrack/gan.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <ostream>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace occtrack {

namespace {

static_assert(std::endian::native == std::endian::little,
              "model serialization assumes a little-endian host");

void sgd_update(std::vector<double>& params, const std::vector<double>& grad,
                std::vector<double>& velocity, double lr, double momentum) {
    for (size_t i = 0; i < params.size(); ++i) {
        velocity[i] = momentum * velocity[i] - lr * grad[i];
        params[i] += velocity[i];
    }
}

std::vector<double> draw_noise(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> z(dim);
    for (double& v : z) v = gauss(rng);
    return z;
}

}  // namespace

void GanTrainConfig::validate() const {
    if (hidden < 1) throw std::invalid_argument("hidden size must be at least 1");
    if (noise_dim < 0) throw std::invalid_argument("noise_dim must be non-negative");
    if (!(lr_g >= 0.0) || !(lr_d >= 0.0)) throw std::invalid_argument("learning rates must be non-negative");
    if (!(momentum >= 0.0 && momentum < 1.0)) throw std::invalid_argument("momentum must be in [0, 1)");
    if (batch_size < 1) throw std::invalid_argument("batch size must be at least 1");
    if (steps < 0) throw std::invalid_argument("step count must be non-negative");
    if (d_steps_per_g < 1) throw std::invalid_argument("d_steps_per_g must be at least 1");
    if (t_obs < 1) throw std::invalid_argument("t_obs must be at least 1");
    if (n_pred < 1) throw std::invalid_argument("n_pred must be at least 1");
    if (!(field_size > 0.0) || !std::isfinite(field_size))
        throw std::invalid_argument("field size must be positive");
    if (!(input_noise >= 0.0) || !std::isfinite(input_noise))
        throw std::invalid_argument("input noise stddev must be non-negative");
}

TrainedGan train_gan(const std::vector<TrajSplit>& data, const GanTrainConfig& cfg) {
    cfg.validate();
    if (data.empty()) throw std::invalid_argument("training data must be non-empty");
    for (const TrajSplit& s : data) {
        s.validate();
        if (s.observed.size() != static_cast<size_t>(cfg.t_obs))
            throw std::invalid_argument("every observed part must have t_obs points");
        if (s.future.size() != static_cast<size_t>(cfg.n_pred))
            throw std::invalid_argument("every future part must have n_pred points");
    }

    std::mt19937_64 rng(cfg.seed);
    TrainedGan out;
    out.model.generator = SeqNetParams::random_init(NetRole::kGenerator, cfg.hidden, cfg.noise_dim, rng);
    out.model.discriminator = SeqNetParams::random_init(NetRole::kDiscriminator, cfg.hidden, 0, rng);
    out.model.t_obs = cfg.t_obs;
    out.model.n_pred = cfg.n_pred;
    out.model.field_size = cfg.field_size;

    SeqNetParams& gen = out.model.generator;
    SeqNetParams& disc = out.model.discriminator;
    std::vector<double> vel_g(gen.count(), 0.0), vel_d(disc.count(), 0.0), grad;
    std::uniform_int_distribution<size_t> pick(0, data.size() - 1);
    const GenConfig gen_cfg{cfg.n_pred, cfg.field_size};

    std::normal_distribution<double> perturb(0.0, 1.0);
    auto smooth = [&](Trajectory& traj) {
        if (cfg.input_noise <= 0.0) return;
        for (auto& p : traj.points) {
            p.x += cfg.input_noise * perturb(rng);
            p.y += cfg.input_noise * perturb(rng);
        }
    };

    for (int step = 0; step < cfg.steps; ++step) {
        for (int ds = 0; ds < cfg.d_steps_per_g; ++ds) {
            std::vector<Trajectory> real;
            std::vector<Trajectory> fakes;
            real.reserve(cfg.batch_size);
            fakes.reserve(cfg.batch_size);
            for (int b = 0; b < cfg.batch_size; ++b) {
                const TrajSplit& s = data[pick(rng)];
                real.push_back(concat_trajectory(s.observed, s.future));
                smooth(real.back());
            }
            for (int b = 0; b < cfg.batch_size; ++b) {
                const TrajSplit& s = data[pick(rng)];
                const std::vector<double> z = draw_noise(cfg.noise_dim, rng);
                fakes.push_back(concat_trajectory(s.observed, generator_forward(gen, s.observed, z, gen_cfg)));
                smooth(fakes.back());
            }
            const double d_loss = discriminator_batch_grad(disc, real, fakes, cfg.field_size, grad);
            sgd_update(disc.flat, grad, vel_d, cfg.lr_d, cfg.momentum);
            out.log.d_loss.push_back(d_loss);
        }
        std::vector<Trajectory> observed;
        std::vector<std::vector<double>> noises;
        observed.reserve(cfg.batch_size);
        noises.reserve(cfg.batch_size);
        for (int b = 0; b < cfg.batch_size; ++b) {
            observed.push_back(data[pick(rng)].observed);
            noises.push_back(draw_noise(cfg.noise_dim, rng));
        }
        const double g_loss = generator_batch_grad(gen, disc, observed, noises, gen_cfg, grad, nullptr);
        sgd_update(gen.flat, grad, vel_g, cfg.lr_g, cfg.momentum);
        out.log.g_loss.push_back(g_loss);
    }
    return out;
}

double evaluate_ade(const SeqNetParams& generator, const std::vector<TrajSplit>& eval,
                    const GenConfig& cfg, uint64_t noise_seed) {
    if (eval.empty()) throw std::invalid_argument("evaluation set must be non-empty");
    std::mt19937_64 rng(noise_seed);
    double sum = 0.0;
    for (const TrajSplit& s : eval) {
        s.validate();
        GenConfig per = cfg;
        per.n_pred = static_cast<int>(s.future.size());
        const std::vector<double> z = draw_noise(generator.noise_dim, rng);
        sum += ade(generator_forward(generator, s.observed, z, per), s.future);
    }
    return sum / static_cast<double>(eval.size());
}

std::vector<TrajSplit> make_splits(const std::vector<Trajectory>& trajectories, int t_obs,
                                   int n_pred) {
    if (t_obs < 1 || n_pred < 1) throw std::invalid_argument("window lengths must be positive");
    const size_t window = static_cast<size_t>(t_obs) + n_pred;
    std::vector<TrajSplit> out;
    for (const Trajectory& traj : trajectories) {
        traj.validate();
        if (traj.size() < window) continue;
        for (size_t s = 0; s + window <= traj.size(); ++s) {
            TrajSplit split;
            split.observed = traj.slice(s, t_obs);
            split.future = traj.slice(s + t_obs, n_pred);
            out.push_back(std::move(split));
        }
    }
    return out;
}

std::vector<ObsLengthRow> observation_length_study(const std::vector<Trajectory>& trajectories,
                                                   const std::vector<int>& lengths,
                                                   const GanTrainConfig& base) {
    base.validate();
    if (lengths.empty()) throw std::invalid_argument("at least one observation length required");
    int max_len = 0;
    for (int l : lengths) {
        if (l < 1) throw std::invalid_argument("observation lengths must be positive");
        max_len = std::max(max_len, l);
    }
    if (trajectories.size() < 5)
        throw std::invalid_argument("study needs at least five trajectories for a held-out split");
    const size_t window = static_cast<size_t>(max_len) + base.n_pred;
    for (const Trajectory& t : trajectories) {
        if (t.size() < window)
            throw std::invalid_argument(
                "every trajectory must cover the longest observation window plus the horizon");
    }

    // Fixed held-out split: every fifth trajectory evaluates, the rest train.
    std::vector<Trajectory> train_set, eval_set;
    for (size_t i = 0; i < trajectories.size(); ++i) {
        (i % 5 == 4 ? eval_set : train_set).push_back(trajectories[i]);
    }

    std::vector<ObsLengthRow> rows;
    for (int len : lengths) {
        GanTrainConfig cfg = base;
        cfg.t_obs = len;
        const std::vector<TrajSplit> train_splits = make_splits(train_set, len, cfg.n_pred);
        const std::vector<TrajSplit> eval_splits = make_splits(eval_set, len, cfg.n_pred);
        if (train_splits.empty() || eval_splits.empty())
            throw std::invalid_argument("observation length leaves no usable windows");
        const TrainedGan trained = train_gan(train_splits, cfg);
        const uint64_t noise_seed = base.seed ^ (0x9e3779b97f4a7c15ULL * (static_cast<uint64_t>(len) + 1));
        const double mean = evaluate_ade(trained.model.generator, eval_splits,
                                         {cfg.n_pred, cfg.field_size}, noise_seed);
        rows.push_back({len, static_cast<int>(eval_splits.size()), mean});
    }
    return rows;
}

void write_study_csv(std::ostream& out, const std::vector<ObsLengthRow>& rows) {
    out << "t_obs,samples,mean_ade\n";
    for (const ObsLengthRow& r : rows) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%d,%d,%.6f\n", r.t_obs, r.sample_count, r.mean_ade);
        out << buf;
    }
}

void save_gan_model(const std::string& path, const GanModel& model) {
    model.generator.validate();
    model.discriminator.validate();
    nlohmann::json header = {
        {"format", "occtrack-gan"},
        {"version", 1},
        {"generator", {{"hidden", model.generator.hidden},
                       {"noise_dim", model.generator.noise_dim},
                       {"count", model.generator.count()}}},
        {"discriminator", {{"hidden", model.discriminator.hidden},
                           {"count", model.discriminator.count()}}},
        {"t_obs", model.t_obs},
        {"n_pred", model.n_pred},
        {"field_size", model.field_size},
    };
    const std::string text = header.dump();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    const uint32_t len = static_cast<uint32_t>(text.size());
    out.write(reinterpret_cast<const char*>(&len), sizeof(len));
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    auto write_doubles = [&](const std::vector<double>& v) {
        out.write(reinterpret_cast<const char*>(v.data()),
                  static_cast<std::streamsize>(v.size() * sizeof(double)));
    };
    write_doubles(model.generator.flat);
    write_doubles(model.discriminator.flat);
    if (!out) throw std::runtime_error("failed to write model file: " + path);
}

GanModel load_gan_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    uint32_t len = 0;
    in.read(reinterpret_cast<char*>(&len), sizeof(len));
    if (!in || len == 0 || len > (1u << 20)) throw std::runtime_error("bad model header length");
    std::string text(len, '\0');
    in.read(text.data(), len);
    if (!in) throw std::runtime_error("truncated model header");
    const nlohmann::json header = nlohmann::json::parse(text);
    if (header.value("format", "") != "occtrack-gan" || header.value("version", 0) != 1)
        throw std::runtime_error("unrecognized model format");

    GanModel model;
    model.generator.role = NetRole::kGenerator;
    model.generator.hidden = header.at("generator").at("hidden").get<int>();
    model.generator.noise_dim = header.at("generator").at("noise_dim").get<int>();
    model.discriminator.role = NetRole::kDiscriminator;
    model.discriminator.hidden = header.at("discriminator").at("hidden").get<int>();
    model.discriminator.noise_dim = 0;
    model.t_obs = header.at("t_obs").get<int>();
    model.n_pred = header.at("n_pred").get<int>();
    model.field_size = header.at("field_size").get<double>();

    auto read_doubles = [&](SeqNetParams& p, size_t expect) {
        p.flat.resize(expect);
        in.read(reinterpret_cast<char*>(p.flat.data()),
                static_cast<std::streamsize>(expect * sizeof(double)));
        if (!in) throw std::runtime_error("truncated model parameters");
    };
    read_doubles(model.generator, header.at("generator").at("count").get<size_t>());
    read_doubles(model.discriminator, header.at("discriminator").at("count").get<size_t>());
    model.generator.validate();
    model.discriminator.validate();
    return model;
}

}  // namespace occtrack
