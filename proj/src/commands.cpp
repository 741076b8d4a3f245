#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numeric>

#include "checkpoint.hpp"
#include "pronostia.hpp"

namespace cghi::commands {

namespace fs = std::filesystem;

namespace {

std::string seed_stem(const ExperimentConfig& cfg, unsigned seed) {
    return variant_to_string(cfg.variant) + "_seed" + std::to_string(seed);
}

std::vector<std::string> run_dirs(const ExperimentConfig& cfg) {
    if (cfg.raw_dir.empty()) throw ConfigError("data.raw_dir is required");
    if (!fs::is_directory(cfg.raw_dir))
        throw io::DataError("raw directory not found: " + cfg.raw_dir);
    std::vector<std::string> ids = cfg.runs;
    if (ids.empty()) {
        for (const auto& e : fs::directory_iterator(cfg.raw_dir))
            if (e.is_directory()) ids.push_back(e.path().filename().string());
        std::sort(ids.begin(), ids.end());
    }
    if (ids.empty()) throw io::DataError("no run directories under " + cfg.raw_dir);
    return ids;
}

dsp::RunFrames to_frames(const dsp::RawRun& raw, const dsp::MelBank& bank,
                         const dsp::MelConfig& mc) {
    dsp::RunFrames run;
    run.run_id = raw.run_id;
    run.condition = raw.condition;
    run.frames.reserve(raw.snapshots.size());
    for (const auto& snap : raw.snapshots) {
        dsp::Frame f;
        f.timestamp_s = snap.timestamp_s;
        f.values = dsp::mel_spectrogram(snap, bank, mc);
        run.frames.push_back(std::move(f));
    }
    dsp::set_life_fractions(run);
    return run;
}

std::vector<dsp::RunFrames> load_store(const ExperimentConfig& cfg) {
    if (cfg.store_path.empty()) throw ConfigError("data.store is required");
    return io::load_frame_store(cfg.store_path);
}

// Indices of the runs used for training; defaults to every stored run.
std::vector<int> train_indices(const ExperimentConfig& cfg,
                               const std::vector<dsp::RunFrames>& runs) {
    std::vector<int> idx;
    if (cfg.train_runs.empty()) {
        idx.resize(runs.size());
        std::iota(idx.begin(), idx.end(), 0);
        return idx;
    }
    for (const auto& id : cfg.train_runs) {
        auto it = std::find_if(runs.begin(), runs.end(),
                               [&id](const dsp::RunFrames& r) { return r.run_id == id; });
        if (it == runs.end()) throw io::DataError("train run not in store: " + id);
        idx.push_back(static_cast<int>(it - runs.begin()));
    }
    return idx;
}

std::vector<unsigned> effective_seeds(const ExperimentConfig& cfg,
                                      const std::vector<unsigned>& override_seeds) {
    return override_seeds.empty() ? cfg.seeds : override_seeds;
}

void train_one_variant(const ExperimentConfig& cfg, const std::string& out_dir,
                       const std::vector<unsigned>& seeds,
                       const std::vector<dsp::RunFrames>& runs) {
    fs::create_directories(out_dir);
    const std::vector<int> idx = train_indices(cfg, runs);
    std::vector<std::string> train_ids;
    for (int i : idx) train_ids.push_back(runs[static_cast<size_t>(i)].run_id);

    for (unsigned seed : seeds) {
        Model model = build_model(cfg.variant, seed);
        cggd::TrainConfig tc = cfg.train;
        tc.seed = seed;
        const cggd::TrainSummary sum = cggd::train_model(model, runs, idx, tc);

        const std::string stem = out_dir + "/" + seed_stem(cfg, seed);
        std::vector<const Param*> params;
        for (Param* p : model.all_params()) params.push_back(p);
        save_checkpoint(stem + ".ckpt", variant_to_string(cfg.variant), params,
                        model.norm_buffers());
        io::write_training_log(stem + "_log.csv", sum.log);
        io::save_split_manifest(stem + "_split.json", train_ids, seed, tc.train_fraction);

        const cggd::EpochLog& last = sum.log.at(static_cast<size_t>(sum.best_epoch) - 1);
        std::cout << seed_stem(cfg, seed) << ": epochs " << sum.epochs_run << ", best epoch "
                  << sum.best_epoch << ", val " << io::fmt(sum.best_val);
        auto rate = [](double viol) { return viol < 0.0 ? std::string("-") : io::fmt(1.0 - viol); };
        std::cout << ", satisfaction mono " << rate(last.viol_mono) << " ene "
                  << rate(last.viol_ene) << " bounds " << rate(last.viol_bounds) << "\n";
    }
}

struct EvalOutput {
    std::vector<io::HiRow> rows;
    std::vector<metrics::BearingMetrics> report;
    // per (run, seed) series aligned with rows, for plotting
    std::vector<metrics::HiSeries> series;
};

EvalOutput evaluate_variant(const ExperimentConfig& cfg, const std::string& ckpt_dir,
                            const std::vector<unsigned>& seeds,
                            const std::vector<dsp::RunFrames>& runs) {
    // Check all checkpoints up front so a missing seed is reported with what
    // is actually on disk.
    for (unsigned seed : seeds) {
        const std::string path = ckpt_dir + "/" + seed_stem(cfg, seed) + ".ckpt";
        if (!fs::exists(path)) {
            std::string found;
            if (fs::is_directory(ckpt_dir))
                for (const auto& e : fs::directory_iterator(ckpt_dir))
                    if (e.path().extension() == ".ckpt")
                        found += (found.empty() ? "" : ", ") + e.path().filename().string();
            throw io::DataError("missing checkpoint " + path +
                                (found.empty() ? " (no checkpoints found)" : " (found: " + found + ")"));
        }
    }

    std::vector<int> eval_idx;
    if (cfg.runs.empty()) {
        eval_idx.resize(runs.size());
        std::iota(eval_idx.begin(), eval_idx.end(), 0);
    } else {
        for (const auto& id : cfg.runs) {
            auto it = std::find_if(runs.begin(), runs.end(),
                                   [&id](const dsp::RunFrames& r) { return r.run_id == id; });
            if (it == runs.end()) throw io::DataError("run not in store: " + id);
            eval_idx.push_back(static_cast<int>(it - runs.begin()));
        }
    }

    EvalOutput out;
    std::vector<std::vector<metrics::HiSeries>> per_run(eval_idx.size());
    for (unsigned seed : seeds) {
        Model model = build_model(cfg.variant, seed);
        load_checkpoint(ckpt_dir + "/" + seed_stem(cfg, seed) + ".ckpt",
                        variant_to_string(cfg.variant), model.all_params(), model.norm_buffers());
        for (size_t k = 0; k < eval_idx.size(); ++k) {
            const dsp::RunFrames& run = runs[static_cast<size_t>(eval_idx[k])];
            const std::vector<double> hi = cggd::predict_hi(model, run);
            metrics::HiSeries s;
            s.run_id = run.run_id;
            s.seed = seed;
            for (size_t i = 0; i < hi.size(); ++i) {
                s.values.push_back(hi[i]);
                s.times.push_back(run.frames[i].timestamp_s);
                out.rows.push_back({run.run_id, seed, run.frames[i].timestamp_s, hi[i]});
            }
            per_run[k].push_back(s);
            out.series.push_back(std::move(s));
        }
    }
    for (size_t k = 0; k < eval_idx.size(); ++k)
        out.report.push_back(metrics::aggregate_bearing(per_run[k].front().run_id, per_run[k]));
    return out;
}

}  // namespace

void cmd_synth(const ExperimentConfig& cfg, const std::string& out_dir) {
    fs::create_directories(out_dir);
    for (int i = 0; i < cfg.synth_run_count; ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "synth_%02d", i + 1);
        const dsp::RawRun run = data::generate_synthetic_run(
            name, cfg.condition, cfg.synth_seed + static_cast<uint64_t>(i), cfg.synth);
        data::write_run_dir(out_dir + "/" + name, run);
        std::cout << name << ": " << run.snapshots.size() << " snapshots\n";
    }
}

void cmd_preprocess(const ExperimentConfig& cfg, const std::string& out_dir) {
    fs::create_directories(out_dir);
    const std::vector<std::string> ids = run_dirs(cfg);

    dsp::MelConfig mc;
    const dsp::MelBank bank = dsp::build_mel_bank(mc);
    std::vector<dsp::RunFrames> runs;
    for (const auto& id : ids) {
        dsp::RawRun raw;
        try {
            raw = data::load_run_dir(cfg.raw_dir + "/" + id, id, cfg.condition);
        } catch (const std::exception& e) {
            throw io::DataError(e.what());
        }
        dsp::RunFrames run = to_frames(raw, bank, mc);
        if (cfg.trim_frames > 0) dsp::trim_startup(run, cfg.trim_frames);
        runs.push_back(std::move(run));
        std::cout << id << ": " << runs.back().frames.size() << " frames\n";
    }

    std::vector<const dsp::RunFrames*> fit_runs;
    if (cfg.train_runs.empty()) {
        for (const auto& r : runs) fit_runs.push_back(&r);
    } else {
        for (const auto& id : cfg.train_runs) {
            auto it = std::find_if(runs.begin(), runs.end(),
                                   [&id](const dsp::RunFrames& r) { return r.run_id == id; });
            if (it == runs.end()) throw io::DataError("train run not among inputs: " + id);
            fit_runs.push_back(&*it);
        }
    }
    const dsp::NormStats stats = dsp::fit_normalization(fit_runs, cfg.condition);
    for (auto& run : runs) dsp::apply_normalization(run, stats);

    io::save_frame_store(out_dir + "/frames.bin", runs);
    io::save_norm_stats(out_dir + "/norm_stats.json", stats);
}

void cmd_train(const ExperimentConfig& cfg, const std::string& out_dir,
               const std::vector<unsigned>& seeds) {
    const std::vector<dsp::RunFrames> runs = load_store(cfg);
    train_one_variant(cfg, out_dir, effective_seeds(cfg, seeds), runs);
}

std::vector<metrics::BearingMetrics> cmd_evaluate(const ExperimentConfig& cfg,
                                                  const std::string& out_dir) {
    if (cfg.checkpoint_dir.empty()) throw ConfigError("data.checkpoint_dir is required");
    fs::create_directories(out_dir);
    const std::vector<dsp::RunFrames> runs = load_store(cfg);
    const EvalOutput out = evaluate_variant(cfg, cfg.checkpoint_dir, cfg.seeds, runs);

    io::write_hi_csv(out_dir + "/hi_curves.csv", out.rows);
    io::write_metric_report(out_dir + "/metric_report.csv", out.report);
    for (const auto& s : out.series) {
        const std::vector<double> smooth = metrics::loess_smooth(s.values, s.times);
        io::write_text_file(out_dir + "/hi_" + s.run_id + "_seed" + std::to_string(s.seed) + ".svg",
                            io::render_hi_svg(s, smooth));
    }
    for (const auto& row : out.report)
        std::cout << row.bearing << ": trendability " << io::fmt(row.trendability.mean) << " +- "
                  << io::fmt(row.trendability.stddev) << ", robustness "
                  << io::fmt(row.robustness.mean) << " +- " << io::fmt(row.robustness.stddev)
                  << ", consistency " << io::fmt(row.consistency.mean) << " +- "
                  << io::fmt(row.consistency.stddev) << "\n";
    return out.report;
}

void cmd_ablation(const ExperimentConfig& cfg, const std::string& out_dir) {
    fs::create_directories(out_dir);
    const std::vector<dsp::RunFrames> runs = load_store(cfg);
    const std::vector<unsigned> seeds = cfg.seeds;

    std::string agg =
        "variant,bearing,trendability_mean,trendability_std,robustness_mean,robustness_std,"
        "consistency_mean,consistency_std\n";
    std::string per_seed = "variant,seed,bearing,trendability,robustness\n";

    for (Variant v : {Variant::Ccae, Variant::CcaeEb, Variant::CcaeMb, Variant::CcaeMe}) {
        ExperimentConfig sub = cfg;
        sub.variant = v;
        sub.toggles = toggles_for(v);
        const std::string vdir = out_dir + "/" + variant_to_string(v);
        train_one_variant(sub, vdir, seeds, runs);
        const EvalOutput out = evaluate_variant(sub, vdir, seeds, runs);

        for (const auto& row : out.report)
            agg += variant_to_string(v) + "," + row.bearing + "," + io::fmt(row.trendability.mean) +
                   "," + io::fmt(row.trendability.stddev) + "," + io::fmt(row.robustness.mean) +
                   "," + io::fmt(row.robustness.stddev) + "," + io::fmt(row.consistency.mean) +
                   "," + io::fmt(row.consistency.stddev) + "\n";
        for (const auto& s : out.series) {
            metrics::HiSeries hs = s;
            per_seed += variant_to_string(v) + "," + std::to_string(s.seed) + "," + s.run_id +
                        "," + io::fmt(metrics::trendability(hs)) + "," +
                        io::fmt(metrics::robustness(hs)) + "\n";
        }
    }
    io::write_text_file(out_dir + "/ablation.csv", agg);
    io::write_text_file(out_dir + "/ablation_per_seed.csv", per_seed);
}

}  // namespace cghi::commands
