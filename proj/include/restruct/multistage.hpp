#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "restruct/errors.hpp"
#include "restruct/money.hpp"

namespace restruct {

/// Change cost and proximity of one trajectory step. Proximity is a small
/// vector: one component for value-based problems, (rho1, rho2) for
/// composite synthesis.
struct stage_metrics {
    money change_cost;
    std::vector<money> proximity;
};

template <typename Sol>
struct trajectory_step {
    Sol solution;
    stage_metrics metrics;
};

/// Ordered restructured solutions <S0, S1*, ..., Sn*> with per-stage cost
/// and proximity.
template <typename Sol>
struct trajectory {
    Sol initial;
    std::vector<trajectory_step<Sol>> steps;
};

struct aggregate_metrics {
    money change_cost;              // H~ = sum of per-stage H
    std::vector<money> proximity;   // rho~ = componentwise sum
};

template <typename Sol>
aggregate_metrics aggregate(const trajectory<Sol>& traj) {
    aggregate_metrics agg;
    for (const auto& step : traj.steps) {
        agg.change_cost += step.metrics.change_cost;
        if (agg.proximity.size() < step.metrics.proximity.size())
            agg.proximity.resize(step.metrics.proximity.size());
        for (std::size_t i = 0; i < step.metrics.proximity.size(); ++i)
            agg.proximity[i] += step.metrics.proximity[i];
    }
    return agg;
}

/// Scheme 1, the series process: each stage restructures the previous
/// stage's restructured solution toward that stage's optimum under the
/// stage budget. `step(prev, stage_index, budget)` runs one restructuring.
template <typename Sol, typename StepFn>
trajectory<Sol> scheme1_series(Sol s0, const std::vector<money>& budgets,
                               StepFn&& step) {
    if (budgets.empty()) throw invalid_instance("scheme1: no stages");
    trajectory<Sol> traj;
    traj.initial = std::move(s0);
    const Sol* prev = &traj.initial;
    for (std::size_t i = 0; i < budgets.size(); ++i) {
        try {
            traj.steps.push_back(step(*prev, i, budgets[i]));
        } catch (const infeasible& e) {
            throw infeasible_with_budget("stage " + std::to_string(i + 1) + ": " +
                                         e.what());
        }
        prev = &traj.steps.back().solution;
    }
    return traj;
}

/// One candidate restructured solution for a stage, with its proximity to
/// that stage's optimum (the change cost depends on the predecessor and is
/// supplied by the connect function).
template <typename Sol>
struct stage_candidate {
    Sol solution;
    std::vector<money> proximity;
};

template <typename Sol>
struct stage_plan_set {
    std::size_t stage = 0;
    std::vector<stage_candidate<Sol>> candidates;
};

/// Scheme 2, the composition process: candidate solutions per stage, then a
/// stage-wise dynamic program picks one per stage minimizing the aggregate
/// of change cost plus proximity (unit weights). The inter-stage change
/// cost comes from `connect(prev, next, stage_index)`; an empty optional
/// marks an inadmissible transition. Ties prefer the earlier candidate.
template <typename Sol, typename ConnectFn>
trajectory<Sol> scheme2_compose(
    Sol s0, const std::vector<stage_plan_set<Sol>>& stages, ConnectFn&& connect) {
    if (stages.empty()) throw invalid_instance("scheme2: no stages");
    for (const auto& st : stages)
        if (st.candidates.empty())
            throw infeasible("scheme2: empty candidate set at stage " +
                             std::to_string(st.stage + 1));

    const auto scalar = [](money h, const std::vector<money>& rho) {
        money s = h;
        for (money r : rho) s += r;
        return s;
    };

    struct cell {
        bool reachable = false;
        money score;
        money step_cost;
        std::size_t back = 0;
    };
    std::vector<std::vector<cell>> dp(stages.size());
    for (std::size_t j = 0; j < stages[0].candidates.size(); ++j) {
        const auto& cand = stages[0].candidates[j];
        if (auto h = connect(s0, cand.solution, std::size_t{0})) {
            dp[0].push_back({true, scalar(*h, cand.proximity), *h, 0});
        } else {
            dp[0].push_back({});
        }
    }
    for (std::size_t i = 1; i < stages.size(); ++i) {
        dp[i].resize(stages[i].candidates.size());
        for (std::size_t j = 0; j < stages[i].candidates.size(); ++j) {
            const auto& cand = stages[i].candidates[j];
            cell best;
            for (std::size_t p = 0; p < stages[i - 1].candidates.size(); ++p) {
                if (!dp[i - 1][p].reachable) continue;
                auto h = connect(stages[i - 1].candidates[p].solution,
                                 cand.solution, i);
                if (!h) continue;
                const money score =
                    dp[i - 1][p].score + scalar(*h, cand.proximity);
                if (!best.reachable || score < best.score) {
                    best = {true, score, *h, p};
                }
            }
            dp[i][j] = best;
        }
    }
    std::optional<std::size_t> last;
    for (std::size_t j = 0; j < dp.back().size(); ++j) {
        if (!dp.back()[j].reachable) continue;
        if (!last || dp.back()[j].score < dp.back()[*last].score) last = j;
    }
    if (!last) throw infeasible("scheme2: no admissible trajectory");

    std::vector<std::size_t> pick(stages.size());
    std::size_t at = *last;
    for (std::size_t i = stages.size(); i-- > 0;) {
        pick[i] = at;
        at = dp[i][at].back;
    }
    trajectory<Sol> traj;
    traj.initial = std::move(s0);
    for (std::size_t i = 0; i < stages.size(); ++i) {
        const auto& cand = stages[i].candidates[pick[i]];
        traj.steps.push_back(
            {cand.solution, {dp[i][pick[i]].step_cost, cand.proximity}});
    }
    return traj;
}

/// Scheme 3, final selection: the Pareto-nondominated trajectories over
/// (H~, rho~ components), all minimized. Equal aggregates are both kept.
template <typename Sol>
std::vector<trajectory<Sol>> scheme3_select(
    const std::vector<trajectory<Sol>>& trajectories) {
    if (trajectories.empty()) throw empty_input("scheme3: no trajectories");
    std::vector<std::vector<money>> keys;
    for (const auto& t : trajectories) {
        const auto agg = aggregate(t);
        std::vector<money> k{agg.change_cost};
        k.insert(k.end(), agg.proximity.begin(), agg.proximity.end());
        keys.push_back(std::move(k));
    }
    for (const auto& k : keys)
        if (k.size() != keys[0].size())
            throw invalid_instance("scheme3: trajectories with mixed proximity arity");
    std::vector<trajectory<Sol>> front;
    for (std::size_t i = 0; i < trajectories.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < trajectories.size(); ++j) {
            if (keys[j] == keys[i]) continue;
            bool le = true;
            for (std::size_t c = 0; c < keys[i].size(); ++c)
                if (keys[j][c] > keys[i][c]) le = false;
            if (le) {
                dominated = true;
                break;
            }
        }
        if (!dominated) front.push_back(trajectories[i]);
    }
    return front;
}

/// Composes k trajectories from per-stage candidate lists by aligned index
/// (candidate j at every stage forms trajectory j), the construction used
/// for explicitly supplied alternatives. `connect` must accept every listed
/// transition.
template <typename Sol, typename ConnectFn>
std::vector<trajectory<Sol>> compose_aligned(
    const Sol& s0, const std::vector<stage_plan_set<Sol>>& stages,
    ConnectFn&& connect) {
    if (stages.empty()) throw invalid_instance("compose: no stages");
    std::size_t k = 0;
    for (const auto& st : stages) k = std::max(k, st.candidates.size());
    if (k == 0) throw infeasible("compose: no candidates");
    std::vector<trajectory<Sol>> out;
    for (std::size_t j = 0; j < k; ++j) {
        trajectory<Sol> traj;
        traj.initial = s0;
        const Sol* prev = &traj.initial;
        for (std::size_t i = 0; i < stages.size(); ++i) {
            const auto& cands = stages[i].candidates;
            const auto& cand = cands[std::min(j, cands.size() - 1)];
            auto h = connect(*prev, cand.solution, i);
            if (!h)
                throw infeasible("compose: inadmissible transition at stage " +
                                 std::to_string(i + 1));
            traj.steps.push_back({cand.solution, {*h, cand.proximity}});
            prev = &traj.steps.back().solution;
        }
        out.push_back(std::move(traj));
    }
    return out;
}

} // namespace restruct
