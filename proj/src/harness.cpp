#include "slicesim/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <stdexcept>

#include "slicesim/dqn.hpp"
#include "slicesim/exp3.hpp"

namespace slicesim {

namespace {

double mean_of(const std::vector<double>& v, size_t from, size_t to) {
    double s = 0.0;
    for (size_t i = from; i < to; ++i) s += v[i];
    return to > from ? s / static_cast<double>(to - from) : 0.0;
}

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lo + hi);
}

std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

}  // namespace

std::optional<int64_t> detect_convergence(const std::vector<double>& series,
                                          int64_t window, double tol) {
    if (window <= 0) throw std::invalid_argument("detect_convergence: window must be positive");
    if (!(tol > 0.0)) throw std::invalid_argument("detect_convergence: tol must be positive");
    int64_t n = static_cast<int64_t>(series.size());
    if (n < 2 * window) return std::nullopt;

    auto ma = [&](int64_t e) {
        int64_t from = std::max<int64_t>(0, e - window + 1);
        return mean_of(series, static_cast<size_t>(from), static_cast<size_t>(e + 1));
    };
    auto stable_at = [&](int64_t e) {
        double cur = ma(e);
        double prev = ma(e - window);
        return std::abs(cur - prev) <= tol * std::max(std::abs(prev), 1e-12);
    };

    // Walk back from the end to the last failing test; the curve counts as
    // settled only from there on, so an early flat stretch before a late
    // jump never registers. The settled tail must itself span a window.
    int64_t settled_from = window;
    for (int64_t e = n - 1; e >= window; --e) {
        if (!stable_at(e)) {
            settled_from = e + 1;
            break;
        }
    }
    if (n - settled_from < window) return std::nullopt;
    return settled_from;
}

double compute_advantage(double steps_a, double acc_a, double steps_b, double acc_b) {
    double denom = steps_b * acc_b;
    if (denom == 0.0) {
        throw std::invalid_argument("compute_advantage: reference product is zero");
    }
    return 100.0 * (steps_a * acc_a - steps_b * acc_b) / denom;
}

std::string agent_name(AgentKind kind) {
    return kind == AgentKind::exp3 ? "exp3" : "dqn";
}

std::pair<int64_t, double> enumerate_best(const Environment& env) {
    int64_t best = 0;
    double best_u = -1.0;
    for (int64_t i = 0; i < env.space().size(); ++i) {
        double u = env.expected_utility(i);
        if (u > best_u) {
            best_u = u;
            best = i;
        }
    }
    return {best, best_u};
}

CellResult run_cell(const CellSpec& spec, uint64_t master_seed) {
    if (spec.episodes <= 0) throw std::invalid_argument("run_cell: episodes must be positive");
    bool budget_mode = spec.steps_per_episode <= 0;
    if (budget_mode && !spec.env.budget) {
        throw std::invalid_argument("run_cell: terminal-length episodes need a budget");
    }

    ActionSpace space = ActionSpace::build(spec.grid, static_cast<int>(spec.env.models.size()));
    Environment env(spec.env, space);
    int64_t k = space.size();

    uint64_t seed = derive_seed(master_seed, spec.cell);
    Rng rng(seed);

    std::optional<Exp3Agent> exp3;
    std::optional<DqnAgent> dqn;
    if (spec.agent == AgentKind::exp3) {
        exp3.emplace(k, spec.exp3.gamma);
    } else {
        DqnConfig cfg = spec.dqn;
        cfg.num_actions = k;
        cfg.obs_dim = env.obs_dim();
        dqn.emplace(cfg, mix64(seed ^ 0x51a7u));
    }

    CellResult result;
    result.cell = spec.cell;
    result.agent = spec.agent;
    result.k_actions = k;
    result.episodes = spec.episodes;
    result.steps_per_episode = spec.steps_per_episode;
    result.records.reserve(static_cast<size_t>(spec.episodes) + 64);

    bool drifts = spec.drift_episode >= 0 && spec.drift_episode < spec.episodes &&
                  !spec.drift_models.empty();

    std::vector<double> series;
    series.reserve(static_cast<size_t>(spec.episodes));
    std::vector<double> obs;

    env.reset();
    for (int64_t e = 0; e < spec.episodes; ++e) {
        if (drifts && e == spec.drift_episode) {
            env.apply_drift(spec.drift_models);
        }
        if (budget_mode) env.reset();

        int64_t steps = 0;
        double sum_u = 0.0, sum_acc = 0.0, sum_cost = 0.0;
        while (true) {
            if (budget_mode) {
                if (env.terminal()) break;
            } else if (steps >= spec.steps_per_episode) {
                break;
            }
            int64_t a;
            if (exp3) {
                a = exp3->select(rng);
            } else {
                obs = env.observation();
                a = dqn->select(obs, rng);
            }
            StepOutcome out = env.step(a, rng);
            if (exp3) {
                exp3->update(a, out.reward_exp3);
            } else {
                dqn->observe(obs, a, out.reward_dqn, out.observation, env.terminal());
                if (dqn->env_steps() % dqn->config().train_every == 0) {
                    dqn->train_step(rng);
                }
            }
            sum_u += out.utility;
            if (out.feasible) {
                double acc = 0.0;
                for (double am : out.per_model_accuracy) acc += am;
                sum_acc += acc / static_cast<double>(out.per_model_accuracy.size());
            }
            sum_cost += out.cost;
            ++steps;
        }
        if (dqn) dqn->end_episode();

        double inv = steps > 0 ? 1.0 / static_cast<double>(steps) : 0.0;
        EpisodeRecord rec;
        rec.experiment = spec.experiment;
        rec.cell = spec.cell;
        rec.agent = agent_name(spec.agent);
        rec.phase = "train";
        rec.episode = e;
        rec.steps = steps;
        rec.mean_utility = sum_u * inv;
        rec.mean_accuracy = 100.0 * sum_acc * inv;
        rec.mean_cost = sum_cost * inv;
        rec.exploration = exp3 ? exp3->policy_entropy() : dqn->epsilon();
        rec.remaining_budget = env.budget_enabled() ? env.remaining_budget() : -1.0;
        result.records.push_back(std::move(rec));
        series.push_back(result.records.back().mean_utility);
        result.train_env_steps += steps;
    }

    // Convergence detection on the per-episode utility means, split at the
    // drift point when one is configured.
    if (drifts) {
        std::vector<double> pre(series.begin(), series.begin() + spec.drift_episode);
        std::vector<double> post(series.begin() + spec.drift_episode, series.end());
        result.conv_initial = detect_convergence(pre);
        result.conv_post_drift = detect_convergence(post);
    } else {
        result.conv_initial = detect_convergence(series);
    }

    size_t tail = static_cast<size_t>(std::max<int64_t>(1, spec.episodes / 5));
    size_t from = series.size() - tail;
    result.final_utility = mean_of(series, from, series.size());
    {
        double s = 0.0;
        for (size_t i = from; i < result.records.size() &&
                              result.records[i].phase == "train";
             ++i) {
            s += result.records[i].mean_accuracy;
        }
        result.final_accuracy = s / static_cast<double>(tail);
    }

    auto greedy_pick = [&]() {
        return exp3 ? exp3->greedy_action() : dqn->greedy_action(env.observation());
    };

    if (!budget_mode && spec.eval_steps > 0) {
        result.greedy_action = greedy_pick();
        double su = 0.0, sacc = 0.0, scost = 0.0;
        for (int64_t i = 0; i < spec.eval_steps; ++i) {
            int64_t a = greedy_pick();
            StepOutcome out = env.step(a, rng);
            su += out.utility;
            if (out.feasible) {
                double acc = 0.0;
                for (double am : out.per_model_accuracy) acc += am;
                sacc += acc / static_cast<double>(out.per_model_accuracy.size());
            }
            scost += out.cost;
        }
        double inv = 1.0 / static_cast<double>(spec.eval_steps);
        result.eval_utility = su * inv;
        result.eval_accuracy = 100.0 * sacc * inv;
        result.eval_expected_utility = env.expected_utility(result.greedy_action);

        EpisodeRecord rec;
        rec.experiment = spec.experiment;
        rec.cell = spec.cell;
        rec.agent = agent_name(spec.agent);
        rec.phase = "eval";
        rec.episode = spec.episodes;
        rec.steps = spec.eval_steps;
        rec.mean_utility = result.eval_utility;
        rec.mean_accuracy = result.eval_accuracy;
        rec.mean_cost = scost * inv;
        rec.exploration = 0.0;
        rec.remaining_budget = env.budget_enabled() ? env.remaining_budget() : -1.0;
        result.records.push_back(std::move(rec));
    }

    if (budget_mode && spec.eval_episodes > 0) {
        std::vector<double> lengths;
        lengths.reserve(static_cast<size_t>(spec.eval_episodes));
        double su = 0.0, sacc = 0.0, scost = 0.0;
        int64_t total = 0;
        for (int64_t ep = 0; ep < spec.eval_episodes; ++ep) {
            env.reset();
            if (ep == 0) {
                result.greedy_action = greedy_pick();
                result.eval_expected_utility = env.expected_utility(result.greedy_action);
            }
            int64_t steps = 0;
            double eu = 0.0, eacc = 0.0, ecost = 0.0;
            while (!env.terminal()) {
                int64_t a = greedy_pick();
                StepOutcome out = env.step(a, rng);
                eu += out.utility;
                if (out.feasible) {
                    double acc = 0.0;
                    for (double am : out.per_model_accuracy) acc += am;
                    eacc += acc / static_cast<double>(out.per_model_accuracy.size());
                }
                ecost += out.cost;
                ++steps;
            }
            lengths.push_back(static_cast<double>(steps));
            su += eu;
            sacc += eacc;
            scost += ecost;
            total += steps;

            EpisodeRecord rec;
            rec.experiment = spec.experiment;
            rec.cell = spec.cell;
            rec.agent = agent_name(spec.agent);
            rec.phase = "eval";
            rec.episode = spec.episodes + ep;
            rec.steps = steps;
            double inv = steps > 0 ? 1.0 / static_cast<double>(steps) : 0.0;
            rec.mean_utility = eu * inv;
            rec.mean_accuracy = 100.0 * eacc * inv;
            rec.mean_cost = ecost * inv;
            rec.exploration = 0.0;
            rec.remaining_budget = env.remaining_budget();
            result.records.push_back(std::move(rec));
        }
        if (total > 0) {
            result.eval_utility = su / static_cast<double>(total);
            result.eval_accuracy = 100.0 * sacc / static_cast<double>(total);
        }
        double s = 0.0;
        for (double l : lengths) s += l;
        result.eval_mean_steps = s / static_cast<double>(lengths.size());
        result.eval_median_steps = median_of(lengths);
    }

    auto [best, best_u] = enumerate_best(env);
    result.best_action = best;
    result.best_expected_utility = best_u;
    return result;
}

namespace {

std::vector<AgentKind> agents_from(const std::string& s) {
    if (s == "exp3") return {AgentKind::exp3};
    if (s == "dqn") return {AgentKind::dqn};
    if (s == "both") return {AgentKind::exp3, AgentKind::dqn};
    throw std::invalid_argument("unknown agent selection '" + s + "'");
}

std::vector<std::string> cases_from(const std::string& s) {
    if (s == "close" || s == "distinct" || s == "none") return {s};
    if (s == "both") return {"close", "distinct"};
    throw std::invalid_argument("unknown drift case '" + s + "'");
}

std::vector<std::string> spaces_from(const std::string& s) {
    if (s == "small" || s == "big") return {s};
    if (s == "both") return {"small", "big"};
    throw std::invalid_argument("unknown space selection '" + s + "'");
}

std::vector<std::string> attackers_from(const std::string& s) {
    if (s == "frequent" || s == "slow") return {s};
    if (s == "both") return {"frequent", "slow"};
    throw std::invalid_argument("unknown attacker selection '" + s + "'");
}

CellSpec base_cell(const std::string& experiment, const RunOptions& opt,
                   AgentKind agent, const RunPreset& preset) {
    CellSpec cell;
    cell.experiment = experiment;
    cell.agent = agent;
    cell.env.constraints = preset_constraints();
    cell.env.quality = preset_quality_stationary();
    cell.env.models = preset_models();
    cell.env.observation = ObservationMode::single;
    cell.grid = preset_grid_small();
    cell.exp3 = preset.exp3;
    cell.dqn = preset.dqn;
    if (opt.exp3_gamma) cell.exp3.gamma = *opt.exp3_gamma;
    if (opt.dqn_batch) cell.dqn.batch_size = *opt.dqn_batch;
    if (agent == AgentKind::exp3) {
        cell.episodes = opt.episodes.value_or(preset.exp3_episodes);
        cell.steps_per_episode = preset.exp3_steps_per_episode;
    } else {
        cell.episodes = opt.episodes.value_or(preset.dqn_episodes);
        cell.steps_per_episode = preset.dqn_steps_per_episode;
    }
    cell.eval_steps = preset.eval_steps;
    return cell;
}

void run_convergence(const RunOptions& opt, ExperimentResult& out) {
    for (const std::string& drift_case : cases_from(opt.drift_case)) {
        bool stationary = drift_case == "none";
        RunPreset preset = preset_run(stationary ? "nearopt" : "convergence", opt.scale);
        for (AgentKind agent : agents_from(opt.agents)) {
            for (int64_t rep = 0; rep < opt.replicates; ++rep) {
                CellSpec cell = base_cell("convergence", opt, agent, preset);
                cell.cell = "conv_" + (stationary ? std::string("stationary") : drift_case) +
                            "_" + agent_name(agent) + "_s" + std::to_string(rep);
                if (!stationary) {
                    cell.drift_episode = opt.drift_episode.value_or(preset.drift_episode);
                    cell.drift_models = drift_case == "close" ? preset_models_drift_close()
                                                              : preset_models_drift_distinct();
                }
                out.cells.push_back(run_cell(cell, opt.seed));
            }
        }
    }
}

void run_adversary(const RunOptions& opt, ExperimentResult& out) {
    RunPreset preset = preset_run("adversary", opt.scale);
    for (const std::string& space : spaces_from(opt.space)) {
        for (const std::string& attacker : attackers_from(opt.attacker)) {
            for (AgentKind agent : agents_from(opt.agents)) {
                for (int64_t rep = 0; rep < opt.replicates; ++rep) {
                    CellSpec cell = base_cell("adversary", opt, agent, preset);
                    cell.grid = space == "big" ? preset_grid_big() : preset_grid_small();
                    cell.env.quality = preset_quality_attacker(attacker == "frequent");
                    cell.cell = "adv_" + space + "_" + attacker + "_" + agent_name(agent) +
                                "_s" + std::to_string(rep);
                    out.cells.push_back(run_cell(cell, opt.seed));
                }
            }
        }
    }
}

void run_budget(const RunOptions& opt, ExperimentResult& out) {
    RunPreset preset = preset_run("budget", opt.scale);
    for (double budget : opt.budgets) {
        std::string label = format_number(budget);
        for (AgentKind agent : agents_from(opt.agents)) {
            for (int64_t rep = 0; rep < opt.replicates; ++rep) {
                CellSpec cell = base_cell("budget", opt, agent, preset);
                cell.env.budget = preset_budget(budget);
                cell.env.observation = ObservationMode::multi;
                cell.steps_per_episode = 0;
                cell.eval_steps = 0;
                cell.eval_episodes = preset.eval_episodes;
                cell.cell = "budget" + label + "_" + agent_name(agent) + "_s" +
                            std::to_string(rep);
                out.cells.push_back(run_cell(cell, opt.seed));
            }
        }
    }

    // Median-over-replicates comparison per budget level, both directions.
    if (agents_from(opt.agents).size() != 2) return;
    for (double budget : opt.budgets) {
        std::string label = format_number(budget);
        std::vector<double> dqn_steps, dqn_acc, exp3_steps, exp3_acc;
        for (const CellResult& cell : out.cells) {
            if (cell.cell.rfind("budget" + label + "_", 0) != 0) continue;
            if (cell.agent == AgentKind::dqn) {
                dqn_steps.push_back(cell.eval_median_steps);
                dqn_acc.push_back(cell.eval_accuracy);
            } else {
                exp3_steps.push_back(cell.eval_median_steps);
                exp3_acc.push_back(cell.eval_accuracy);
            }
        }
        AdvantageRow row;
        row.label = label;
        row.dqn_steps = median_of(dqn_steps);
        row.dqn_accuracy = median_of(dqn_acc);
        row.exp3_steps = median_of(exp3_steps);
        row.exp3_accuracy = median_of(exp3_acc);
        row.dqn_advantage = compute_advantage(row.dqn_steps, row.dqn_accuracy,
                                              row.exp3_steps, row.exp3_accuracy);
        row.exp3_advantage = compute_advantage(row.exp3_steps, row.exp3_accuracy,
                                               row.dqn_steps, row.dqn_accuracy);
        out.advantage.push_back(row);
    }
}

void run_timing(const RunOptions& opt, ExperimentResult& out) {
    using clock = std::chrono::steady_clock;
    RunPreset preset = preset_run("timing", opt.scale);
    constexpr int64_t kBlock = 100;

    EnvConfig env_cfg;
    env_cfg.models = preset_models();
    env_cfg.constraints = preset_constraints();
    env_cfg.quality = preset_quality_stationary();
    env_cfg.observation = ObservationMode::single;
    ActionSpace space = ActionSpace::build(preset_grid_small(),
                                           static_cast<int>(env_cfg.models.size()));

    auto measure_blocks = [&](auto&& one_step) {
        std::vector<double> blocks;
        int64_t done = 0;
        while (done < opt.timing_steps) {
            int64_t n = std::min<int64_t>(kBlock, opt.timing_steps - done);
            auto t0 = clock::now();
            for (int64_t i = 0; i < n; ++i) one_step();
            auto t1 = clock::now();
            blocks.push_back(
                std::chrono::duration<double, std::micro>(t1 - t0).count() /
                static_cast<double>(n));
            done += n;
        }
        return median_of(blocks);
    };

    {
        Environment env(env_cfg, space);
        env.reset();
        double gamma = opt.exp3_gamma.value_or(preset.exp3.gamma);
        Exp3Agent agent(space.size(), gamma);
        Rng rng(derive_seed(opt.seed, "timing_exp3"));
        for (int64_t i = 0; i < 1000; ++i) {
            int64_t a = agent.select(rng);
            StepOutcome o = env.step(a, rng);
            agent.update(a, o.reward_exp3);
        }
        TimingRow row;
        row.agent = "exp3";
        row.batch = 0;
        row.us_per_step = measure_blocks([&] {
            int64_t a = agent.select(rng);
            StepOutcome o = env.step(a, rng);
            agent.update(a, o.reward_exp3);
        });
        out.timing.push_back(row);
    }

    double dqn_reference_us = 0.0;
    for (int64_t batch : opt.batches) {
        Environment env(env_cfg, space);
        env.reset();
        DqnConfig cfg = preset.dqn;
        cfg.num_actions = space.size();
        cfg.obs_dim = env.obs_dim();
        cfg.batch_size = batch;
        cfg.train_every = 1;
        cfg.epsilon_start = cfg.epsilon_final;
        cfg.epsilon_decay = 1.0;
        if (cfg.replay_capacity < batch) cfg.replay_capacity = batch;
        DqnAgent agent(cfg, derive_seed(opt.seed, "timing_dqn_net"));
        Rng rng(derive_seed(opt.seed, "timing_dqn_b" + std::to_string(batch)));
        std::vector<double> obs;
        auto one_step = [&] {
            obs = env.observation();
            int64_t a = agent.select(obs, rng);
            StepOutcome o = env.step(a, rng);
            agent.observe(obs, a, o.reward_dqn, o.observation, false);
            agent.train_step(rng);
        };
        for (int64_t i = 0; i < batch + kBlock; ++i) one_step();  // fill replay first
        TimingRow row;
        row.agent = "dqn";
        row.batch = batch;
        row.us_per_step = measure_blocks(one_step);
        out.timing.push_back(row);
        dqn_reference_us = row.us_per_step;  // last (largest) batch
    }

    if (!out.timing.empty() && out.timing.front().us_per_step > 0.0) {
        out.exp3_steps_per_dqn_step = dqn_reference_us / out.timing.front().us_per_step;
    }
}

}  // namespace

ExperimentResult run_experiment(const std::string& experiment, const RunOptions& options) {
    auto t0 = std::chrono::steady_clock::now();
    ExperimentResult out;
    out.experiment = experiment;
    out.scale = options.scale;
    out.seed = options.seed;
    if (experiment == "convergence") {
        run_convergence(options, out);
    } else if (experiment == "adversary") {
        run_adversary(options, out);
    } else if (experiment == "budget") {
        run_budget(options, out);
    } else if (experiment == "timing") {
        run_timing(options, out);
    } else {
        throw std::invalid_argument("run_experiment: unknown experiment '" + experiment + "'");
    }
    auto t1 = std::chrono::steady_clock::now();
    out.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return out;
}

}  // namespace slicesim
