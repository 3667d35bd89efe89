#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <map>
#include <string>
#include <vector>

#include "vanetsim/rng.hpp"
#include "vanetsim/street_graph.hpp"

namespace vanetsim {

// Binary environment feedback: 0 rewards the chosen action, 1 penalizes it.
enum class ReinforcementSignal : int { kReward = 0, kPenalty = 1 };

// Variable-structure learning automaton over r actions (one per street),
// linear reward-penalty updates.
class LearningAutomaton {
  public:
    LearningAutomaton(std::size_t action_count, double reward_step, double penalty_step);

    // p_i += a(1-p_i); p_j *= (1-a) for j != i.
    void reward(std::size_t action);

    // p_i *= (1-b); p_j += b/(r-1) + stays scaled by (1-b). Needs r >= 2.
    void penalize(std::size_t action);

    void apply(std::size_t action, ReinforcementSignal beta) {
        beta == ReinforcementSignal::kReward ? reward(action) : penalize(action);
    }

    // Inverse-CDF sample over ascending action index.
    std::size_t select_action(Rng& rng) const;

    double probability(std::size_t action) const { return p_.at(action); }
    const std::vector<double>& probabilities() const { return p_; }
    std::size_t action_count() const { return p_.size(); }
    std::uint64_t update_count() const { return updates_; }
    double reward_step() const { return reward_step_; }
    double penalty_step() const { return penalty_step_; }

  private:
    std::vector<double> p_;
    double reward_step_;
    double penalty_step_;
    std::uint64_t updates_ = 0;
};

// Minimum vehicle count for a street to count as wirelessly coverable:
// floor(length / tx_range) + 2.
long required_min(double street_length, double tx_range);

// beta = reward iff n_vehicles >= min_required.
ReinforcementSignal compute_beta(long n_vehicles, long min_required);

// Final probability to edge cost: r * (1 - p); anti-monotone in p, in [0, r].
double street_cost(double p_final, std::size_t r);

using DensityQuery = std::function<long(StreetId)>;

struct LearningOptions {
    double reward_step = 0.1;
    double penalty_step = 0.1;
    std::optional<std::size_t> iterations;  // default: 50 * street count
    bool initial_sweep = true;
    double tx_range = 500.0;
};

// Offline learning phase: one deterministic sweep evaluating every street
// once, then sampled select/evaluate/update steps; final probabilities are
// mapped through street_cost into a CostMatrix. The query is invoked once
// per evaluated street and may advance its own mobility between calls.
CostMatrix run_learning_phase(const StreetGraph& graph, const DensityQuery& density,
                              const LearningOptions& opts, Rng& rng,
                              std::vector<double>* final_probabilities = nullptr);

struct TrafficBucket {
    CostMatrix costs;
    std::vector<double> p_final;
};

// Per-time-of-day learned cost databases, keyed by bucket label.
struct TrafficDatabase {
    std::map<std::string, TrafficBucket> buckets;
};

}  // namespace vanetsim
