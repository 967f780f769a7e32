#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "caatlas/sampling.hpp"

using namespace caatlas;

TEST_CASE("make_soup honours forced densities") {
    SoupParams p;
    p.density_lo = p.density_hi = 0.0;
    RandomStream s1(1);
    CHECK(make_soup(s1, p).population() == 0);

    p.density_lo = p.density_hi = 1.0;
    RandomStream s2(1);
    CHECK(make_soup(s2, p).population() == 256);
}

TEST_CASE("mean soup density approaches 1/2") {
    // Oracle: direct tally over many soups; expectation of a
    // Uniform(0,1)-compound Bernoulli is 1/2.
    SoupParams p;
    RandomStream stream(2024);
    uint64_t live = 0, cells = 0;
    for (int i = 0; i < 10000; ++i) {
        Grid g = make_soup(stream, p);
        live += g.population();
        cells += p.initial_size * p.initial_size;
    }
    double mean = double(live) / double(cells);
    CHECK(mean == doctest::Approx(0.5).epsilon(0.04));  // 0.5 +/- 0.02
}

TEST_CASE("sampling an empty grid yields only U0") {
    Rule rule = parse_rule("B3/S23");
    Grid empty(-2, -2, 20, 20);
    Grid after = step(empty, rule);
    RandomStream stream(3);
    TransitionCounts t = sample_transitions(empty, after, rule, stream, 50);
    CHECK(t.total == 50);
    CHECK(t.counts[size_t(kUnborn * 9 + 0)] == 50);
}

TEST_CASE("lone live cell: only D0 and U1 transitions observable") {
    Rule rule = parse_rule("B3/S23");
    Grid g(-3, -3, 9, 9);
    g.set(0, 0, true);
    Grid after = step(g, rule);
    RandomStream stream(4);
    TransitionCounts t = sample_transitions(g, after, rule, stream, 200);
    CHECK(t.total == 200);
    // Region is the 3x3 box around the cell: the live centre dies with 0
    // neighbours, the 8 dead neighbours stay dead with 1 neighbour.
    CHECK(t.counts[size_t(kDie * 9 + 0)] + t.counts[size_t(kUnborn * 9 + 1)] ==
          200);
    CHECK(t.counts[size_t(kDie * 9 + 0)] > 0);
}

TEST_CASE("2x2 block: block cells tally S3") {
    Rule rule = parse_rule("B3/S23");
    Grid g(-3, -3, 10, 10);
    for (int y = 0; y < 2; ++y)
        for (int x = 0; x < 2; ++x) g.set(x, y, true);
    Grid after = step(g, rule);
    RandomStream stream(5);
    TransitionCounts t = sample_transitions(g, after, rule, stream, 400);
    // 4x4 region: 4 block cells survive with 3 neighbours; the dead ring
    // sees 1 or 2 neighbours and stays dead.
    CHECK(t.counts[size_t(kSurvive * 9 + 3)] > 0);
    CHECK(t.counts[size_t(kSurvive * 9 + 3)] +
              t.counts[size_t(kUnborn * 9 + 1)] +
              t.counts[size_t(kUnborn * 9 + 2)] ==
          400);
}

TEST_CASE("run_trial of B/S puts all mass on the U row") {
    SoupParams p;
    p.num_trials = 1;
    EmulationPlan plan = classify(parse_rule("B/S"));
    RandomStream stream(6);
    auto [even, odd] = run_trial(plan, p, stream);
    CHECK(even.counts == odd.counts);
    uint64_t u_mass = 0;
    for (int n = 0; n <= 8; ++n) u_mass += even.counts[size_t(kUnborn * 9 + n)];
    CHECK(u_mass == even.total);
    CHECK(even.counts[size_t(kUnborn * 9 + 0)] == even.total);  // all dead
}

TEST_CASE("estimate_vector invariants for all three plan kinds") {
    SoupParams p;
    p.num_trials = 30;
    SeedRecipe recipe{99};
    for (const char* text : {"B3/S23", "B0123478/S01234678", "B03/S23"}) {
        EmulationPlan plan = classify(parse_rule(text));
        BehaviourVector vec = estimate_vector(plan, p, recipe);
        CHECK(vec.even_sum() == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(vec.odd_sum() == doctest::Approx(1.0).epsilon(1e-9));
        Bool72 allowed = boolean_vector(plan);
        for (size_t i = 0; i < 72; ++i) {
            CHECK(vec.v[i] >= 0.0);
            CHECK(vec.v[i] <= 1.0);
            if (!allowed[i]) CHECK(vec.v[i] == 0.0);
        }
        if (!plan.strobing())
            for (size_t i = 0; i < 36; ++i) CHECK(vec.v[i] == vec.v[36 + i]);
    }
}

TEST_CASE("total sample count matches trials x samples") {
    SoupParams p;
    p.num_trials = 12;
    p.num_samples = 7;
    EmulationPlan plan = classify(parse_rule("B36/S23"));
    SeedRecipe recipe{1};
    TransitionCounts even, odd;
    for (uint64_t k = 0; k < p.num_trials; ++k) {
        RandomStream stream(recipe.stream_seed(encode(plan.original), k));
        auto [e, o] = run_trial(plan, p, stream);
        even.add(e);
        odd.add(o);
    }
    CHECK(even.total == p.num_trials * p.num_samples);
    CHECK(odd.total == p.num_trials * p.num_samples);
}

TEST_CASE("seed determinism") {
    SoupParams p;
    p.num_trials = 20;
    EmulationPlan plan = classify(parse_rule("B36/S125"));
    BehaviourVector a = estimate_vector(plan, p, SeedRecipe{7});
    BehaviourVector b = estimate_vector(plan, p, SeedRecipe{7});
    BehaviourVector c = estimate_vector(plan, p, SeedRecipe{8});
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("distinct (rule, trial) pairs get distinct stream seeds") {
    SeedRecipe recipe{1234};
    CHECK(recipe.stream_seed(0, 1) != recipe.stream_seed(1, 0));
    CHECK(recipe.stream_seed(5, 7) != recipe.stream_seed(7, 5));
    CHECK(recipe.stream_seed(5, 7) == recipe.stream_seed(5, 7));
}

TEST_CASE("parameter validation") {
    SoupParams p;
    p.num_trials = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = SoupParams{};
    p.density_lo = 0.8;
    p.density_hi = 0.2;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
