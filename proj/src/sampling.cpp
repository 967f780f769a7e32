#include "caatlas/sampling.hpp"

#include <stdexcept>

namespace caatlas {

void SoupParams::validate() const {
    if (!(density_lo >= 0.0 && density_hi <= 1.0 && density_lo <= density_hi))
        throw std::invalid_argument("density range must satisfy 0 <= lo <= hi <= 1");
    if (initial_size == 0 || num_steps == 0 || num_samples == 0 ||
        num_trials == 0)
        throw std::invalid_argument("soup parameters must be positive");
}

double BehaviourVector::even_sum() const {
    double s = 0;
    for (int i = 0; i < 36; ++i) s += v[i];
    return s;
}

double BehaviourVector::odd_sum() const {
    double s = 0;
    for (int i = 36; i < 72; ++i) s += v[i];
    return s;
}

Grid make_soup(RandomStream& stream, const SoupParams& params) {
    int64_t size = int64_t(params.initial_size);
    double d = params.density_lo +
               (params.density_hi - params.density_lo) * stream.next_double();
    Grid grid(-2, -2, size + 4, size + 4);
    for (int64_t y = 0; y < size; ++y)
        for (int64_t x = 0; x < size; ++x)
            if (stream.next_double() < d) grid.set(x, y, true);
    return grid;
}

namespace {

// Live Moore neighbours with out-of-region cells dead; no bounds check.
int count_neighbours(const Grid& g, int64_t x, int64_t y) {
    int count = 0;
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx)
            if (dx || dy) count += g.get(x + dx, y + dy);
    return count;
}

}  // namespace

TransitionCounts sample_transitions(const Grid& before, const Grid& after,
                                    const Rule& rule, RandomStream& stream,
                                    uint64_t n, uint64_t empty_region_size) {
    (void)rule;
    BoundingBox bb = before.live_bounds();
    int64_t x0, y0, w, h;
    if (bb.empty) {
        x0 = y0 = 0;
        w = h = int64_t(empty_region_size);
    } else {
        x0 = bb.x0 - 1;
        y0 = bb.y0 - 1;
        w = bb.width() + 2;
        h = bb.height() + 2;
    }
    TransitionCounts tally;
    for (uint64_t i = 0; i < n; ++i) {
        int64_t x = x0 + int64_t(stream.next_below(uint64_t(w)));
        int64_t y = y0 + int64_t(stream.next_below(uint64_t(h)));
        bool s0 = before.get(x, y);
        bool s1 = after.get(x, y);
        int count = count_neighbours(before, x, y);
        int type = s0 ? (s1 ? kSurvive : kDie) : (s1 ? kBorn : kUnborn);
        ++tally.counts[size_t(type * 9 + count)];
        ++tally.total;
    }
    return tally;
}

std::pair<TransitionCounts, TransitionCounts> run_trial(
    const EmulationPlan& plan, const SoupParams& params, RandomStream& stream) {
    Grid grid = make_soup(stream, params);
    auto rule_at = [&](int64_t g) -> const Rule& {
        return (plan.strobing() && g % 2 != 0) ? plan.odd : plan.even;
    };
    for (uint64_t t = 0; t < params.num_steps; ++t)
        grid = step(grid, rule_at(int64_t(t)));

    if (!plan.strobing()) {
        Grid after = step(grid, plan.run());
        TransitionCounts tally =
            sample_transitions(grid, after, plan.run(), stream,
                               params.num_samples, params.initial_size);
        return {tally, tally};
    }

    // Strobing: one sample pass per parity, consecutive generations.
    TransitionCounts half[2];
    int64_t g = int64_t(params.num_steps);
    for (int pass = 0; pass < 2; ++pass, ++g) {
        const Rule& r = rule_at(g);
        Grid after = step(grid, r);
        half[g % 2] = sample_transitions(grid, after, r, stream,
                                         params.num_samples,
                                         params.initial_size);
        grid = std::move(after);
    }
    return {half[0], half[1]};
}

BehaviourVector estimate_vector(const EmulationPlan& plan,
                                const SoupParams& params,
                                const SeedRecipe& recipe) {
    params.validate();
    uint32_t id = encode(plan.original);
    TransitionCounts even, odd;
    #pragma omp parallel
    {
        TransitionCounts local_even, local_odd;
        #pragma omp for schedule(static) nowait
        for (int64_t k = 0; k < int64_t(params.num_trials); ++k) {
            RandomStream stream(recipe.stream_seed(id, uint64_t(k)));
            auto [e, o] = run_trial(plan, params, stream);
            local_even.add(e);
            local_odd.add(o);
        }
        #pragma omp critical
        {
            even.add(local_even);
            odd.add(local_odd);
        }
    }
    BehaviourVector out;
    for (int i = 0; i < 36; ++i) {
        out.v[i] = double(even.counts[size_t(i)]) / double(even.total);
        out.v[36 + i] = double(odd.counts[size_t(i)]) / double(odd.total);
    }
    return out;
}

}  // namespace caatlas
