#pragma once

#include <array>
#include <cstdint>
#include <utility>

#include "caatlas/grid.hpp"
#include "caatlas/rng.hpp"
#include "caatlas/rules.hpp"

namespace caatlas {

struct SoupParams {
    double density_lo = 0.0;
    double density_hi = 1.0;
    uint64_t initial_size = 16;
    uint64_t num_steps = 50;
    uint64_t num_samples = 50;
    uint64_t num_trials = 1000;

    bool operator==(const SoupParams&) const = default;
    void validate() const;  // throws std::invalid_argument
};

// Transition tallies for one half: index type * 9 + neighbour count.
struct TransitionCounts {
    std::array<uint64_t, 36> counts{};
    uint64_t total = 0;

    void add(const TransitionCounts& other) {
        for (size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
        total += other.total;
    }
};

// 72 transition-probability estimates, even half then odd half, each
// half summing to 1.
struct BehaviourVector {
    std::array<double, 72> v{};

    bool operator==(const BehaviourVector&) const = default;
    double even_sum() const;
    double odd_sum() const;
};

// initial_size x initial_size square at (0,0)..(size-1,size-1), each cell
// live with probability d, d drawn uniformly from the density range.
Grid make_soup(RandomStream& stream, const SoupParams& params);

// Draws n cells uniformly with replacement from the sampling region (live
// bounding box of `before` grown by 1, or the initial soup square when the
// grid is empty) and tallies the observed transitions. Requires
// after == step(before, rule).
TransitionCounts sample_transitions(const Grid& before, const Grid& after,
                                    const Rule& rule, RandomStream& stream,
                                    uint64_t n, uint64_t empty_region_size = 16);

// One soup run: step num_steps generations, then sample num_samples
// transitions per half. Plain/AntiInfinity plans return the same tally in
// both halves; Strobing plans sample the even rule's step and the odd
// rule's step separately.
std::pair<TransitionCounts, TransitionCounts> run_trial(
    const EmulationPlan& plan, const SoupParams& params, RandomStream& stream);

// num_trials independent trials, tallies summed, each half normalized by
// its total. Streams derive from (recipe, original rule id, trial index),
// so the result is identical regardless of execution order.
BehaviourVector estimate_vector(const EmulationPlan& plan,
                                const SoupParams& params,
                                const SeedRecipe& recipe);

}  // namespace caatlas
