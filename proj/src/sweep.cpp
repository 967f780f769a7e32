#include "caatlas/sweep.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace caatlas {

namespace {

// Checkpoint: fixed header then appended records; a record torn by a
// kill is detected by length and dropped on resume.
constexpr char kCkptMagic[4] = {'C', 'A', 'V', 'L'};
constexpr size_t kCkptHeaderSize = 4 + 8 + 8 + 8 + 8 * 4;
constexpr size_t kRecordSize = 4 + 4 * 72;

void write_checkpoint_header(std::ostream& out, const SweepSpec& spec) {
    out.write(kCkptMagic, 4);
    auto put64 = [&](uint64_t v) {
        out.write(reinterpret_cast<const char*>(&v), 8);
    };
    auto putd = [&](double v) {
        out.write(reinterpret_cast<const char*>(&v), 8);
    };
    put64(spec.global_seed);
    putd(spec.params.density_lo);
    putd(spec.params.density_hi);
    put64(spec.params.initial_size);
    put64(spec.params.num_steps);
    put64(spec.params.num_samples);
    put64(spec.params.num_trials);
}

std::vector<StoreRecord> read_checkpoint(const std::string& path,
                                         const SweepSpec& spec) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return {};
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kCkptMagic, 4) != 0)
        throw std::runtime_error(path + ": corrupt checkpoint (bad magic)");
    auto get64 = [&]() {
        uint64_t v;
        in.read(reinterpret_cast<char*>(&v), 8);
        if (!in) throw std::runtime_error(path + ": corrupt checkpoint header");
        return v;
    };
    auto getd = [&]() {
        double v;
        in.read(reinterpret_cast<char*>(&v), 8);
        if (!in) throw std::runtime_error(path + ": corrupt checkpoint header");
        return v;
    };
    uint64_t seed = get64();
    SoupParams p;
    p.density_lo = getd();
    p.density_hi = getd();
    p.initial_size = get64();
    p.num_steps = get64();
    p.num_samples = get64();
    p.num_trials = get64();
    if (seed != spec.global_seed || !(p == spec.params))
        throw std::runtime_error(
            path + ": checkpoint parameters do not match this sweep");
    std::vector<StoreRecord> records;
    for (;;) {
        StoreRecord rec;
        in.read(reinterpret_cast<char*>(&rec.id), 4);
        if (in.gcount() < 4) break;
        in.read(reinterpret_cast<char*>(rec.v.data()), 4 * 72);
        if (in.gcount() < int64_t(4 * 72)) break;  // torn tail record
        records.push_back(rec);
    }
    return records;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
    spec.params.validate();
    if (spec.shard_count == 0 || spec.shard_index >= spec.shard_count)
        throw std::invalid_argument("sweep: shard index must be < shard count");
    if (spec.id_end > kRuleCount || spec.id_begin > spec.id_end)
        throw std::invalid_argument("sweep: bad rule id range");
    if (spec.out_path.empty())
        throw std::invalid_argument("sweep: output path required");

    std::vector<RuleId> ids;
    for (RuleId id = spec.id_begin; id < spec.id_end; ++id)
        if (id % spec.shard_count == spec.shard_index) ids.push_back(id);

    std::vector<StoreRecord> done;
    std::set<RuleId> have;
    if (!spec.checkpoint_path.empty()) {
        done = read_checkpoint(spec.checkpoint_path, spec);
        for (const StoreRecord& rec : done) have.insert(rec.id);
    }
    SweepResult result;
    result.resumed = done.size();

    std::vector<RuleId> todo;
    for (RuleId id : ids)
        if (!have.count(id)) todo.push_back(id);

    std::ofstream ckpt;
    if (!spec.checkpoint_path.empty()) {
        bool fresh = done.empty();
        ckpt.open(spec.checkpoint_path,
                  std::ios::binary | (fresh ? std::ios::trunc : std::ios::app));
        if (!ckpt)
            throw std::runtime_error(spec.checkpoint_path +
                                     ": cannot open checkpoint for writing");
        if (fresh) {
            write_checkpoint_header(ckpt, spec);
            ckpt.flush();
        }
    }

#ifdef _OPENMP
    int jobs = spec.jobs > 0 ? spec.jobs : omp_get_max_threads();
#else
    int jobs = 1;
#endif
    SeedRecipe recipe{spec.global_seed};
    size_t batch = std::max<size_t>(size_t(jobs) * 4, 16);
    uint64_t flushed = 0;
    bool stopped = false;
    for (size_t pos = 0; pos < todo.size() && !stopped; pos += batch) {
        size_t end = std::min(todo.size(), pos + batch);
        std::vector<StoreRecord> chunk(end - pos);
        #pragma omp parallel for schedule(dynamic) num_threads(jobs)
        for (int64_t i = int64_t(pos); i < int64_t(end); ++i) {
            RuleId id = todo[size_t(i)];
            EmulationPlan plan = classify(decode(id));
            BehaviourVector vec = estimate_vector(plan, spec.params, recipe);
            chunk[size_t(i) - pos] = StoreRecord{id, to_floats(vec)};
        }
        for (StoreRecord& rec : chunk) {
            if (ckpt.is_open()) {
                ckpt.write(reinterpret_cast<const char*>(&rec.id), 4);
                ckpt.write(reinterpret_cast<const char*>(rec.v.data()), 4 * 72);
            }
            done.push_back(rec);
            ++flushed;
            if (spec.max_records && flushed >= spec.max_records) {
                stopped = true;
                break;
            }
        }
        if (ckpt.is_open()) ckpt.flush();
    }
    result.computed = flushed;

    if (stopped) return result;  // partial run; checkpoint holds progress

    VectorStore store;
    store.params = spec.params;
    store.global_seed = spec.global_seed;
    std::sort(done.begin(), done.end(),
              [](const StoreRecord& a, const StoreRecord& b) {
                  return a.id < b.id;
              });
    store.records = std::move(done);
    store_write(store, spec.out_path);
    if (!spec.checkpoint_path.empty())
        std::remove(spec.checkpoint_path.c_str());
    result.complete = true;
    return result;
}

}  // namespace caatlas
