#include "occtrack/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "occtrack/errors.hpp"

namespace occtrack {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        if (!allowed.count(key))
            throw ValidationError("unknown config key '" + key + "' in " + where);
    }
}

OcclusionCriterion criterion_from(const std::string& s) {
    if (s == "distance") return OcclusionCriterion::kDistance;
    if (s == "score") return OcclusionCriterion::kScore;
    if (s == "composite") return OcclusionCriterion::kComposite;
    throw ValidationError("unknown criterion: " + s);
}

const char* criterion_name(OcclusionCriterion c) {
    switch (c) {
        case OcclusionCriterion::kDistance: return "distance";
        case OcclusionCriterion::kScore: return "score";
        case OcclusionCriterion::kComposite: return "composite";
    }
    return "composite";
}

void parse_occlusion(const json& j, OcclusionConfig& cfg) {
    check_keys(j, {"level_weights", "distance_threshold", "score_threshold", "mix_weight",
                   "epsilon_threshold", "score_norm", "distance_norm"},
               "occlusion");
    if (j.contains("level_weights")) {
        const json& w = j.at("level_weights");
        if (!w.is_array() || w.size() != 3)
            throw ValidationError("level_weights must have three entries");
        for (size_t i = 0; i < 3; ++i) cfg.level_weights[i] = w[i].get<double>();
    }
    cfg.distance_threshold = j.value("distance_threshold", cfg.distance_threshold);
    cfg.score_threshold = j.value("score_threshold", cfg.score_threshold);
    cfg.mix_weight = j.value("mix_weight", cfg.mix_weight);
    cfg.epsilon_threshold = j.value("epsilon_threshold", cfg.epsilon_threshold);
    cfg.score_norm = j.value("score_norm", cfg.score_norm);
    cfg.distance_norm = j.value("distance_norm", cfg.distance_norm);
}

void parse_appearance(const json& j, AppearanceConfig& cfg) {
    check_keys(j, {"grid", "context", "sigmas"}, "appearance");
    cfg.grid = j.value("grid", cfg.grid);
    cfg.context = j.value("context", cfg.context);
    if (j.contains("sigmas")) {
        const json& s = j.at("sigmas");
        if (!s.is_array() || s.size() != 3) throw ValidationError("sigmas must have three entries");
        for (size_t i = 0; i < 3; ++i) cfg.sigmas[i] = s[i].get<double>();
    }
}

void parse_pipeline(const json& j, PipelineConfig& cfg) {
    check_keys(j, {"top_k", "t_obs", "n_pred", "max_predict", "history_capacity", "field_size",
                   "seed"},
               "pipeline");
    cfg.top_k = j.value("top_k", cfg.top_k);
    cfg.t_obs = j.value("t_obs", cfg.t_obs);
    cfg.n_pred = j.value("n_pred", cfg.n_pred);
    cfg.max_predict = j.value("max_predict", cfg.max_predict);
    cfg.history_capacity = j.value("history_capacity", cfg.history_capacity);
    cfg.field_size = j.value("field_size", cfg.field_size);
    cfg.seed = j.value("seed", cfg.seed);
}

void parse_gan(const json& j, GanTrainConfig& cfg) {
    check_keys(j, {"hidden", "noise_dim", "lr_g", "lr_d", "momentum", "batch_size", "steps",
                   "d_steps_per_g", "t_obs", "n_pred", "field_size", "seed", "input_noise"},
               "gan");
    cfg.hidden = j.value("hidden", cfg.hidden);
    cfg.noise_dim = j.value("noise_dim", cfg.noise_dim);
    cfg.lr_g = j.value("lr_g", cfg.lr_g);
    cfg.lr_d = j.value("lr_d", cfg.lr_d);
    cfg.momentum = j.value("momentum", cfg.momentum);
    cfg.batch_size = j.value("batch_size", cfg.batch_size);
    cfg.steps = j.value("steps", cfg.steps);
    cfg.d_steps_per_g = j.value("d_steps_per_g", cfg.d_steps_per_g);
    cfg.t_obs = j.value("t_obs", cfg.t_obs);
    cfg.n_pred = j.value("n_pred", cfg.n_pred);
    cfg.field_size = j.value("field_size", cfg.field_size);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.input_noise = j.value("input_noise", cfg.input_noise);
}

}  // namespace

ToolConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config JSON parse error: ") + e.what());
    }
    try {
        ToolConfig cfg;
        check_keys(j, {"occlusion", "criterion", "appearance", "pipeline", "gan"}, "config root");
        if (j.contains("occlusion")) parse_occlusion(j.at("occlusion"), cfg.pipeline.occlusion);
        if (j.contains("criterion"))
            cfg.pipeline.criterion = criterion_from(j.at("criterion").get<std::string>());
        if (j.contains("appearance")) parse_appearance(j.at("appearance"), cfg.pipeline.appearance);
        if (j.contains("pipeline")) parse_pipeline(j.at("pipeline"), cfg.pipeline);
        if (j.contains("gan")) parse_gan(j.at("gan"), cfg.gan);
        try {
            cfg.pipeline.validate();
            cfg.gan.validate();
        } catch (const std::invalid_argument& e) {
            throw ValidationError(e.what());
        }
        return cfg;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config JSON field error: ") + e.what());
    }
}

std::string config_to_json(const ToolConfig& cfg) {
    const PipelineConfig& p = cfg.pipeline;
    const GanTrainConfig& g = cfg.gan;
    json j = {
        {"occlusion",
         {{"level_weights", p.occlusion.level_weights},
          {"distance_threshold", p.occlusion.distance_threshold},
          {"score_threshold", p.occlusion.score_threshold},
          {"mix_weight", p.occlusion.mix_weight},
          {"epsilon_threshold", p.occlusion.epsilon_threshold},
          {"score_norm", p.occlusion.score_norm},
          {"distance_norm", p.occlusion.distance_norm}}},
        {"criterion", criterion_name(p.criterion)},
        {"appearance",
         {{"grid", p.appearance.grid}, {"context", p.appearance.context},
          {"sigmas", p.appearance.sigmas}}},
        {"pipeline",
         {{"top_k", p.top_k}, {"t_obs", p.t_obs}, {"n_pred", p.n_pred},
          {"max_predict", p.max_predict}, {"history_capacity", p.history_capacity},
          {"field_size", p.field_size}, {"seed", p.seed}}},
        {"gan",
         {{"hidden", g.hidden}, {"noise_dim", g.noise_dim}, {"lr_g", g.lr_g}, {"lr_d", g.lr_d},
          {"momentum", g.momentum}, {"batch_size", g.batch_size}, {"steps", g.steps},
          {"d_steps_per_g", g.d_steps_per_g}, {"t_obs", g.t_obs}, {"n_pred", g.n_pred},
          {"field_size", g.field_size}, {"seed", g.seed},
          {"input_noise", g.input_noise}}},
    };
    return j.dump(2);
}

ToolConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return config_from_json(buf.str());
}

}  // namespace occtrack
