#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <string>

#include "caatlas/sweep.hpp"

using namespace caatlas;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

SweepSpec small_spec(const std::string& tag) {
    SweepSpec spec;
    spec.id_begin = 6100;
    spec.id_end = 6116;
    spec.params.num_trials = 5;
    spec.global_seed = 77;
    spec.out_path = "/tmp/caatlas_sweep_" + tag + ".cavs";
    spec.checkpoint_path = "/tmp/caatlas_sweep_" + tag + ".ckpt";
    return spec;
}

void cleanup(const SweepSpec& spec) {
    std::remove(spec.out_path.c_str());
    std::remove(spec.checkpoint_path.c_str());
}

}  // namespace

TEST_CASE("sweep resume after interruption matches uninterrupted run") {
    SweepSpec full = small_spec("full");
    run_sweep(full);
    std::string expected = slurp(full.out_path);

    SweepSpec partial = small_spec("partial");
    partial.max_records = 6;
    SweepResult r1 = run_sweep(partial);
    CHECK_FALSE(r1.complete);
    CHECK(r1.computed == 6);

    partial.max_records = 0;
    SweepResult r2 = run_sweep(partial);
    CHECK(r2.complete);
    CHECK(r2.resumed == 6);
    CHECK(slurp(partial.out_path) == expected);
    cleanup(full);
    cleanup(partial);
}

TEST_CASE("sweep worker count does not change the output bytes") {
    SweepSpec a = small_spec("j1");
    a.jobs = 1;
    SweepSpec b = small_spec("j4");
    b.jobs = 4;
    run_sweep(a);
    run_sweep(b);
    CHECK(slurp(a.out_path) == slurp(b.out_path));
    cleanup(a);
    cleanup(b);
}

TEST_CASE("shards merge to the single-run store") {
    SweepSpec whole = small_spec("whole");
    run_sweep(whole);
    VectorStore expected = store_read(whole.out_path);

    VectorStore merged;
    bool first = true;
    for (uint32_t i = 0; i < 4; ++i) {
        SweepSpec shard = small_spec("shard" + std::to_string(i));
        shard.shard_index = i;
        shard.shard_count = 4;
        run_sweep(shard);
        VectorStore part = store_read(shard.out_path);
        merged = first ? part : store_merge(merged, part);
        first = false;
        cleanup(shard);
    }
    CHECK(merged == expected);
    cleanup(whole);
}

TEST_CASE("mismatched checkpoint is reported, not ignored") {
    SweepSpec spec = small_spec("mismatch");
    spec.max_records = 3;
    run_sweep(spec);
    spec.max_records = 0;
    spec.global_seed = 78;  // different seed than the checkpoint
    CHECK_THROWS_AS(run_sweep(spec), std::runtime_error);
    cleanup(spec);
}

TEST_CASE("sweep argument validation") {
    SweepSpec spec = small_spec("bad");
    spec.shard_index = 5;
    spec.shard_count = 4;
    CHECK_THROWS_AS(run_sweep(spec), std::invalid_argument);
    spec = small_spec("bad2");
    spec.out_path.clear();
    CHECK_THROWS_AS(run_sweep(spec), std::invalid_argument);
    cleanup(spec);
}
