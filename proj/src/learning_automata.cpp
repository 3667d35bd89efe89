#include "vanetsim/learning_automata.hpp"

#include <cmath>
#include <stdexcept>

namespace vanetsim {

LearningAutomaton::LearningAutomaton(std::size_t action_count, double reward_step,
                                     double penalty_step)
    : reward_step_(reward_step), penalty_step_(penalty_step) {
    if (action_count < 1)
        throw std::invalid_argument("automaton needs at least one action");
    if (reward_step < 0.0 || reward_step >= 1.0 || penalty_step < 0.0 || penalty_step >= 1.0)
        throw std::invalid_argument("learning steps must lie in [0, 1)");
    p_.assign(action_count, 1.0 / static_cast<double>(action_count));
}

void LearningAutomaton::reward(std::size_t action) {
    if (action >= p_.size())
        throw std::out_of_range("action index out of range");
    const double a = reward_step_;
    for (std::size_t j = 0; j < p_.size(); ++j)
        p_[j] = j == action ? p_[j] + a * (1.0 - p_[j]) : (1.0 - a) * p_[j];
    ++updates_;
}

void LearningAutomaton::penalize(std::size_t action) {
    if (action >= p_.size())
        throw std::out_of_range("action index out of range");
    if (p_.size() < 2)
        throw std::domain_error("penalize undefined for a single action");
    const double b = penalty_step_;
    const double share = b / static_cast<double>(p_.size() - 1);
    for (std::size_t j = 0; j < p_.size(); ++j)
        p_[j] = j == action ? (1.0 - b) * p_[j] : share + (1.0 - b) * p_[j];
    ++updates_;
}

std::size_t LearningAutomaton::select_action(Rng& rng) const {
    const double u = rng.uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < p_.size(); ++i) {
        acc += p_[i];
        if (u < acc)
            return i;
    }
    return p_.size() - 1;
}

long required_min(double street_length, double tx_range) {
    if (street_length <= 0.0 || tx_range <= 0.0)
        throw std::invalid_argument("street length and tx range must be positive");
    return static_cast<long>(std::floor(street_length / tx_range)) + 2;
}

ReinforcementSignal compute_beta(long n_vehicles, long min_required) {
    return n_vehicles >= min_required ? ReinforcementSignal::kReward
                                      : ReinforcementSignal::kPenalty;
}

double street_cost(double p_final, std::size_t r) {
    return static_cast<double>(r) * (1.0 - p_final);
}

CostMatrix run_learning_phase(const StreetGraph& graph, const DensityQuery& density,
                              const LearningOptions& opts, Rng& rng,
                              std::vector<double>* final_probabilities) {
    const std::size_t r = graph.num_streets();
    LearningAutomaton la(r, opts.reward_step, opts.penalty_step);

    const auto evaluate = [&](std::size_t street) {
        long n;
        try {
            n = density(static_cast<StreetId>(street));
        } catch (const std::exception& e) {
            throw std::runtime_error("density query failed for street " +
                                     std::to_string(street) + ": " + e.what());
        }
        const long min_req = required_min(graph.street(static_cast<StreetId>(street)).length,
                                          opts.tx_range);
        la.apply(street, compute_beta(n, min_req));
    };

    if (opts.initial_sweep) {
        for (std::size_t s = 0; s < r; ++s)
            evaluate(s);
    }
    const std::size_t iterations = opts.iterations.value_or(50 * r);
    for (std::size_t k = 0; k < iterations; ++k)
        evaluate(la.select_action(rng));

    CostMatrix costs;
    costs.cost.reserve(r);
    for (std::size_t s = 0; s < r; ++s)
        costs.cost.push_back(street_cost(la.probability(s), r));
    if (final_probabilities)
        *final_probabilities = la.probabilities();
    return costs;
}

}  // namespace vanetsim
