#include "experiment.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

namespace cghi {

using nlohmann::json;

namespace {

void require_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, value] : j.items())
        if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

template <typename T>
void maybe(const json& j, const char* key, T& out) {
    if (j.contains(key)) {
        try {
            out = j.at(key).get<T>();
        } catch (const json::exception& e) {
            throw ConfigError(std::string("config key '") + key + "': " + e.what());
        }
    }
}

constraints::RescaleSet parse_rescale(const json& j) {
    if (j.is_string()) {
        const std::string name = j.get<std::string>();
        if (name == "rf_c1") return constraints::rescale_set_c1();
        if (name == "rf_c2") return constraints::rescale_set_c2();
        throw ConfigError("unknown rescale set '" + name + "' (expected rf_c1 or rf_c2)");
    }
    if (!j.is_object()) throw ConfigError("rescale_set must be a name or an object");
    require_keys(j, {"mono_lo", "mono_hi", "ene", "upper", "lower"}, "rescale_set");
    constraints::RescaleSet rs;
    maybe(j, "mono_lo", rs.mono_lo);
    maybe(j, "mono_hi", rs.mono_hi);
    maybe(j, "ene", rs.ene);
    maybe(j, "upper", rs.upper);
    maybe(j, "lower", rs.lower);
    if (rs.mono_hi < rs.mono_lo) throw ConfigError("rescale_set: mono_hi below mono_lo");
    return rs;
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config: " + path);
    json j;
    try {
        is >> j;
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError(path + ": config must be a JSON object");
    require_keys(j,
                 {"schema_version", "variant", "seeds", "condition", "rescale_set", "toggles",
                  "constraints", "train", "data", "synth"},
                 path);

    if (!j.contains("schema_version")) throw ConfigError(path + ": missing schema_version");
    if (j.at("schema_version") != 1)
        throw ConfigError(path + ": unsupported schema_version (expected 1)");

    ExperimentConfig cfg;
    if (j.contains("variant")) {
        try {
            cfg.variant = variant_from_string(j.at("variant").get<std::string>());
        } catch (const std::exception& e) {
            throw ConfigError(path + ": " + e.what());
        }
    }
    cfg.toggles = toggles_for(cfg.variant);
    maybe(j, "seeds", cfg.seeds);
    if (cfg.seeds.empty()) throw ConfigError(path + ": seeds must be nonempty");
    maybe(j, "condition", cfg.condition);

    if (j.contains("rescale_set")) cfg.rescale = parse_rescale(j.at("rescale_set"));

    // Toggles are derived from the variant; an explicit block must agree
    // (e.g. ccae_eb with mono on is a contradiction, not an override).
    if (j.contains("toggles")) {
        const json& t = j.at("toggles");
        require_keys(t, {"mono", "ene", "bounds", "softrank"}, "toggles");
        ConstraintToggles given = cfg.toggles;
        maybe(t, "mono", given.mono);
        maybe(t, "ene", given.ene);
        maybe(t, "bounds", given.bounds);
        maybe(t, "softrank", given.softrank);
        if (given.mono != cfg.toggles.mono || given.ene != cfg.toggles.ene ||
            given.bounds != cfg.toggles.bounds || given.softrank != cfg.toggles.softrank)
            throw ConfigError(path + ": toggles contradict variant '" +
                              variant_to_string(cfg.variant) + "'");
    }

    if (j.contains("constraints")) {
        const json& c = j.at("constraints");
        require_keys(c,
                     {"alpha", "kappa", "a_pct", "b_pct", "bound_a", "bound_b", "epsilon_min",
                      "eps_sr", "lambda_sr"},
                     "constraints");
        auto& cc = cfg.train.cfg;
        maybe(c, "alpha", cc.alpha);
        maybe(c, "kappa", cc.kappa);
        maybe(c, "a_pct", cc.a_pct);
        maybe(c, "b_pct", cc.b_pct);
        maybe(c, "bound_a", cc.b_a);
        maybe(c, "bound_b", cc.b_b);
        maybe(c, "epsilon_min", cc.epsilon_min);
        maybe(c, "eps_sr", cc.eps_sr);
        maybe(c, "lambda_sr", cc.lambda_sr);
        if (cc.alpha <= 0.0) throw ConfigError("constraints: alpha must be positive");
        if (!(cc.kappa > 0.0 && cc.kappa < 1.0))
            throw ConfigError("constraints: kappa must lie in (0, 1)");
    }

    if (j.contains("train")) {
        const json& t = j.at("train");
        require_keys(t,
                     {"batch_size", "max_epochs", "patience", "lr", "lr_decay", "lr_decay_at",
                      "bn_freeze_at", "train_fraction", "composition"},
                     "train");
        maybe(t, "batch_size", cfg.train.batch_size);
        maybe(t, "max_epochs", cfg.train.max_epochs);
        maybe(t, "patience", cfg.train.patience);
        maybe(t, "lr", cfg.train.lr);
        maybe(t, "lr_decay", cfg.train.lr_decay);
        maybe(t, "lr_decay_at", cfg.train.lr_decay_at);
        maybe(t, "bn_freeze_at", cfg.train.bn_freeze_at);
        maybe(t, "train_fraction", cfg.train.train_fraction);
        if (t.contains("composition")) {
            std::vector<double> comp;
            maybe(t, "composition", comp);
            if (comp.size() != 3) throw ConfigError("train.composition needs 3 fractions");
            cfg.train.composition = {comp[0], comp[1], comp[2]};
        }
        if (cfg.train.batch_size < 2) throw ConfigError("train.batch_size must be >= 2");
        if (cfg.train.max_epochs < 1) throw ConfigError("train.max_epochs must be >= 1");
        if (cfg.train.patience < 1) throw ConfigError("train.patience must be >= 1");
        if (!(cfg.train.lr > 0.0)) throw ConfigError("train.lr must be positive");
        if (!(cfg.train.lr_decay >= 1.0)) throw ConfigError("train.lr_decay must be >= 1");
        if (!(cfg.train.lr_decay_at >= 0.0 && cfg.train.lr_decay_at <= 1.0))
            throw ConfigError("train.lr_decay_at must lie in [0, 1]");
        if (!(cfg.train.bn_freeze_at > 0.0 && cfg.train.bn_freeze_at <= 1.0))
            throw ConfigError("train.bn_freeze_at must lie in (0, 1]");
        if (!(cfg.train.train_fraction > 0.0 && cfg.train.train_fraction < 1.0))
            throw ConfigError("train.train_fraction must lie in (0, 1)");
    }
    cfg.train.rescale = cfg.rescale;

    if (j.contains("data")) {
        const json& d = j.at("data");
        require_keys(d,
                     {"raw_dir", "runs", "train_runs", "store", "norm_stats", "checkpoint_dir",
                      "trim_frames"},
                     "data");
        maybe(d, "raw_dir", cfg.raw_dir);
        maybe(d, "runs", cfg.runs);
        maybe(d, "train_runs", cfg.train_runs);
        maybe(d, "store", cfg.store_path);
        maybe(d, "norm_stats", cfg.norm_stats_path);
        maybe(d, "checkpoint_dir", cfg.checkpoint_dir);
        maybe(d, "trim_frames", cfg.trim_frames);
        if (cfg.trim_frames < 0) throw ConfigError("data.trim_frames must be >= 0");
    }

    if (j.contains("synth")) {
        const json& s = j.at("synth");
        require_keys(s,
                     {"runs", "frames", "profile", "seed", "noise_sigma", "tone_amplitude",
                      "tones", "growth_ratio", "knee_life", "cadence_s"},
                     "synth");
        maybe(s, "runs", cfg.synth_run_count);
        maybe(s, "frames", cfg.synth.n_frames);
        maybe(s, "seed", cfg.synth_seed);
        maybe(s, "noise_sigma", cfg.synth.noise_sigma);
        maybe(s, "tone_amplitude", cfg.synth.tone_amplitude);
        maybe(s, "tones", cfg.synth.tones);
        maybe(s, "growth_ratio", cfg.synth.growth_ratio);
        maybe(s, "knee_life", cfg.synth.knee_life);
        maybe(s, "cadence_s", cfg.synth.cadence_s);
        if (s.contains("profile")) {
            try {
                cfg.synth.profile =
                    data::synth_profile_from_string(s.at("profile").get<std::string>());
            } catch (const std::exception& e) {
                throw ConfigError(path + ": " + e.what());
            }
        }
        if (cfg.synth_run_count < 1) throw ConfigError("synth.runs must be >= 1");
        if (cfg.synth.n_frames < 20) throw ConfigError("synth.frames must be >= 20");
        if (cfg.synth.tones < 1) throw ConfigError("synth.tones must be >= 1");
        if (!(cfg.synth.knee_life >= 0.0 && cfg.synth.knee_life < 1.0))
            throw ConfigError("synth.knee_life must lie in [0, 1)");
    }

    return cfg;
}

}  // namespace cghi
