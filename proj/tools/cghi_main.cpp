// Command-line front end: preprocess, synth, train, evaluate, ablation.
// Exit codes: 0 ok, 1 usage/config error, 2 data error, 3 numeric failure.
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cggd.hpp"
#include "commands.hpp"
#include "experiment.hpp"
#include "io.hpp"

namespace {

struct CommonArgs {
    std::string config;
    std::string out = ".";
    std::vector<unsigned> seeds;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool seeds_opt) {
    cmd->add_option("--config", args.config, "experiment config JSON")->required();
    cmd->add_option("--out", args.out, "output directory");
    if (seeds_opt) cmd->add_option("--seeds", args.seeds, "override config seeds");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"constraint-guided health-indicator training"};
    app.require_subcommand(1);

    CommonArgs pre, syn, tr, ev, ab;
    CLI::App* c_pre = app.add_subcommand("preprocess", "raw recordings -> frame store");
    add_common(c_pre, pre, false);
    CLI::App* c_syn = app.add_subcommand("synth", "generate synthetic run-to-failure data");
    add_common(c_syn, syn, false);
    CLI::App* c_tr = app.add_subcommand("train", "train one variant over seeds");
    add_common(c_tr, tr, true);
    CLI::App* c_ev = app.add_subcommand("evaluate", "checkpoints -> HI curves, metrics, plots");
    add_common(c_ev, ev, true);
    CLI::App* c_ab = app.add_subcommand("ablation", "constraint-removal comparison table");
    add_common(c_ab, ab, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (c_pre->parsed()) {
            cghi::commands::cmd_preprocess(cghi::load_config(pre.config), pre.out);
        } else if (c_syn->parsed()) {
            cghi::commands::cmd_synth(cghi::load_config(syn.config), syn.out);
        } else if (c_tr->parsed()) {
            cghi::ExperimentConfig cfg = cghi::load_config(tr.config);
            cghi::commands::cmd_train(cfg, tr.out, tr.seeds);
        } else if (c_ev->parsed()) {
            cghi::ExperimentConfig cfg = cghi::load_config(ev.config);
            if (!ev.seeds.empty()) cfg.seeds = ev.seeds;
            cghi::commands::cmd_evaluate(cfg, ev.out);
        } else if (c_ab->parsed()) {
            cghi::ExperimentConfig cfg = cghi::load_config(ab.config);
            if (!ab.seeds.empty()) cfg.seeds = ab.seeds;
            cghi::commands::cmd_ablation(cfg, ab.out);
        }
    } catch (const cghi::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const cghi::io::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const cghi::cggd::NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
