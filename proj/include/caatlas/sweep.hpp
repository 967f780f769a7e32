#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "caatlas/store.hpp"

namespace caatlas {

struct SweepSpec {
    RuleId id_begin = 0;
    RuleId id_end = kRuleCount;  // exclusive
    uint32_t shard_index = 0;    // keep ids with id % shard_count == index
    uint32_t shard_count = 1;
    int jobs = 0;  // 0 = all hardware threads
    std::string checkpoint_path;  // empty = no checkpointing
    std::string out_path;
    SoupParams params;
    uint64_t global_seed = 0;
    uint64_t max_records = 0;  // stop after this many new records (0 = all)
};

struct SweepResult {
    uint64_t computed = 0;
    uint64_t resumed = 0;  // records recovered from the checkpoint
    bool complete = false;
};

// Computes estimate_vector for every rule id in the shard not already
// checkpointed, flushing finished records to the checkpoint in id-sorted
// batches, then writes the final store atomically. A killed run resumes
// from the checkpoint and produces a byte-identical final store.
SweepResult run_sweep(const SweepSpec& spec);

}  // namespace caatlas
