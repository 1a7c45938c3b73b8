// Copyright 2026 The qbound authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qbound/bnb.hpp"
#include "qbound/descent.hpp"
#include "qbound/io.hpp"
#include "qbound/lmi.hpp"
#include "qbound/qubo.hpp"

namespace {

using json = nlohmann::ordered_json;

struct CommonOpts {
    std::string input;
    std::string format = "triplet";
    std::uint64_t seed = 0;
    std::string json_out;
    int verbosity = 0;
};

void add_common(CLI::App* cmd, CommonOpts* opts) {
    cmd->add_option("input", opts->input, "instance file")->required();
    cmd->add_option("--format", opts->format, "instance format")
        ->check(CLI::IsMember({"triplet", "maxcut"}))
        ->capture_default_str();
    cmd->add_option("--seed", opts->seed, "seed for all randomized pieces")->capture_default_str();
    cmd->add_option("--json-out", opts->json_out, "also write the result JSON to this file");
    cmd->add_flag("-v,--verbose", opts->verbosity, "structured progress log on stderr");
}

qbound::InstanceFormat format_of(const CommonOpts& opts) {
    return opts.format == "maxcut" ? qbound::InstanceFormat::MaxCut
                                   : qbound::InstanceFormat::Triplet;
}

void emit(const json& result, const CommonOpts& opts) {
    std::cout << result.dump(2) << "\n";
    if (!opts.json_out.empty()) {
        std::ofstream out(opts.json_out);
        if (!out) throw qbound::InputError("cannot write " + opts.json_out);
        out << result.dump(2) << "\n";
    }
}

class Stopwatch {
 public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

 private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

int run_solve(const CommonOpts& opts, const qbound::BnbConfig& cfg_in) {
    const qbound::QuboProblem p = qbound::load_instance(opts.input, format_of(opts));
    qbound::BnbConfig cfg = cfg_in;
    cfg.seed = opts.seed;
    if (opts.verbosity >= 1) {
        cfg.on_progress = [](const qbound::BnbProgress& pr) {
            std::cerr << qbound::progress_json(pr).dump() << "\n";
        };
    }
    const qbound::BnbResult res = qbound::solve(p, cfg);

    json params;
    params["subcommand"] = "solve";
    params["input"] = opts.input;
    params["format"] = opts.format;
    params["N"] = cfg.node_params.max_outer;
    params["k1"] = cfg.node_params.bisection_iters;
    params["k2"] = cfg.node_params.boundary_limit;
    params["root_N"] = cfg.root_params.max_outer;
    params["root_k1"] = cfg.root_params.bisection_iters;
    params["time_limit_s"] = cfg.time_limit_s;
    params["node_limit"] = cfg.node_limit ? json(cfg.node_limit) : json(nullptr);
    params["primal_injection"] = cfg.injected_primal ? json(*cfg.injected_primal) : json(nullptr);
    params["warmstart"] = cfg.use_warmstart;

    emit(qbound::solve_result_json(res, opts.seed, std::move(params)), opts);
    return 0;
}

int run_bound(const CommonOpts& opts, qbound::DescentParams dp, bool trace) {
    const Stopwatch watch;
    const qbound::QuboProblem p = qbound::load_instance(opts.input, format_of(opts));
    dp.seed = opts.seed;
    dp.keep_trace = trace;

    const qbound::LmiSystem sys(p);
    const qbound::QcrShift shift = qbound::trivial_shift(p, opts.seed);
    const qbound::PlanePoint start = qbound::initial_feasible_point(sys, shift);
    const qbound::DescentResult res = qbound::descend(sys, start, dp);

    json params;
    params["subcommand"] = "bound";
    params["input"] = opts.input;
    params["format"] = opts.format;
    params["N"] = dp.max_outer;
    params["k1"] = dp.bisection_iters;
    params["k2"] = dp.boundary_limit;

    json out = qbound::bound_result_json(res, p.offset() + res.bound, opts.seed,
                                         std::move(params), watch.seconds());
    if (trace) {
        json tr = json::array();
        for (const auto& pt : res.trace) tr.push_back({{"f", pt.f}, {"step", pt.step}});
        out["trace"] = std::move(tr);
    }
    emit(out, opts);
    return 0;
}

int run_brute(const CommonOpts& opts) {
    const Stopwatch watch;
    const qbound::QuboProblem p = qbound::load_instance(opts.input, format_of(opts));
    if (p.size() > 25)
        throw qbound::InputError("brute: refusing to enumerate more than 25 variables");
    const qbound::BruteForceResult res = qbound::brute_force_max(p);

    json params;
    params["subcommand"] = "brute";
    params["input"] = opts.input;
    params["format"] = opts.format;
    emit(qbound::brute_result_json(res, opts.seed, std::move(params), watch.seconds()), opts);
    return 0;
}

int run_convert(const CommonOpts& opts, const std::string& out_path) {
    const Stopwatch watch;
    const qbound::QuboProblem p = qbound::load_instance(opts.input, format_of(opts));
    const std::string text = qbound::serialize_triplet(p);

    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return 0;
    }
    std::ofstream out(out_path);
    if (!out) throw qbound::InputError("cannot write " + out_path);
    out << text;

    json params;
    params["subcommand"] = "convert";
    params["input"] = opts.input;
    params["format"] = opts.format;
    emit(qbound::convert_result_json(out_path, opts.seed, std::move(params), watch.seconds()),
         opts);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"QUBO dual bounds via SDP plane projection, and an exact branch-and-bound solver"};
    app.require_subcommand(1);

    CommonOpts solve_opts, bound_opts, brute_opts, convert_opts;
    qbound::BnbConfig bnb_cfg;
    qbound::DescentParams bound_params;  // standalone defaults: N=50000, k1=5, k2=2
    bool bound_trace = false;
    std::string convert_out;

    CLI::App* solve_cmd = app.add_subcommand("solve", "prove a global maximum by branch-and-bound");
    add_common(solve_cmd, &solve_opts);
    solve_cmd->add_option("--time-limit", bnb_cfg.time_limit_s, "wall-clock limit in seconds")
        ->capture_default_str();
    solve_cmd->add_option("--node-limit", bnb_cfg.node_limit, "0 = unlimited")
        ->capture_default_str();
    solve_cmd->add_option("--iters", bnb_cfg.node_params.max_outer, "descent iterations per node")
        ->capture_default_str();
    solve_cmd->add_option("--root-iters", bnb_cfg.root_params.max_outer,
                          "descent iterations at the root")
        ->capture_default_str();
    solve_cmd
        ->add_option("--bisection", bnb_cfg.node_params.bisection_iters,
                     "bisection steps per descent iteration")
        ->capture_default_str();
    solve_cmd
        ->add_option("--stall", bnb_cfg.node_params.boundary_limit,
                     "consecutive boundary iterations before a node descent stops")
        ->capture_default_str();
    double primal = 0.0;
    CLI::Option* primal_opt =
        solve_cmd->add_option("--primal", primal, "inject a known feasible objective value");
    solve_cmd->add_flag("--no-warmstart", "cold-start the descent at every node");

    CLI::App* bound_cmd = app.add_subcommand("bound", "single dual bound from a coldstart descent");
    add_common(bound_cmd, &bound_opts);
    bound_cmd->add_option("--iters", bound_params.max_outer, "descent iteration limit")
        ->capture_default_str();
    bound_cmd->add_option("--bisection", bound_params.bisection_iters, "bisection steps")
        ->capture_default_str();
    bound_cmd->add_option("--stall", bound_params.boundary_limit, "boundary-stall limit")
        ->capture_default_str();
    bound_cmd->add_flag("--trace", bound_trace, "include the per-iteration trace in the JSON");

    CLI::App* brute_cmd = app.add_subcommand("brute", "exact maximum by enumeration (n <= 25)");
    add_common(brute_cmd, &brute_opts);

    CLI::App* convert_cmd = app.add_subcommand("convert", "re-serialize an instance as triplets");
    add_common(convert_cmd, &convert_opts);
    convert_cmd->add_option("--out", convert_out, "output path ('-' = stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve_cmd->parsed()) {
            if (*primal_opt) bnb_cfg.injected_primal = primal;
            if (solve_cmd->count("--no-warmstart") > 0) bnb_cfg.use_warmstart = false;
            return run_solve(solve_opts, bnb_cfg);
        }
        if (bound_cmd->parsed()) return run_bound(bound_opts, bound_params, bound_trace);
        if (brute_cmd->parsed()) return run_brute(brute_opts);
        if (convert_cmd->parsed()) return run_convert(convert_opts, convert_out);
    } catch (const qbound::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const qbound::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
