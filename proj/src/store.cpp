#include "caatlas/store.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace caatlas {

namespace {

constexpr char kMagic[4] = {'C', 'A', 'V', 'S'};
constexpr uint8_t kVersion = 1;
constexpr float kHalfSumTolerance = 1e-5f;  // float32 rounding headroom

static_assert(std::endian::native == std::endian::little,
              "store I/O assumes a little-endian host");

template <typename T>
void put(std::ostream& out, T value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in, const std::string& name) {
    T value;
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw std::runtime_error(name + ": truncated store file");
    return value;
}

std::array<std::string, 72> make_labels() {
    std::array<std::string, 72> labels;
    const char* halves[2] = {"even", "odd"};
    const char* types = "BSUD";
    for (int half = 0; half < 2; ++half)
        for (int type = 0; type < 4; ++type)
            for (int n = 0; n <= 8; ++n)
                labels[size_t(dim_index(half, type, n))] =
                    std::string(halves[half]) + "_" + types[type] +
                    std::to_string(n);
    return labels;
}

}  // namespace

const std::array<std::string, 72> kDimensionLabels = make_labels();

std::array<float, 72> to_floats(const BehaviourVector& vec) {
    std::array<float, 72> out;
    for (size_t i = 0; i < 72; ++i) out[i] = float(vec.v[i]);
    return out;
}

BehaviourVector to_doubles(const std::array<float, 72>& v) {
    BehaviourVector out;
    for (size_t i = 0; i < 72; ++i) out.v[i] = double(v[i]);
    return out;
}

void VectorStore::insert(RuleId id, const BehaviourVector& vec) {
    StoreRecord rec{id, to_floats(vec)};
    auto it = std::lower_bound(
        records.begin(), records.end(), id,
        [](const StoreRecord& r, RuleId v) { return r.id < v; });
    if (it != records.end() && it->id == id)
        throw std::runtime_error("duplicate rule id " + std::to_string(id));
    records.insert(it, rec);
}

const StoreRecord* VectorStore::find(RuleId id) const {
    auto it = std::lower_bound(
        records.begin(), records.end(), id,
        [](const StoreRecord& r, RuleId v) { return r.id < v; });
    if (it == records.end() || it->id != id) return nullptr;
    return &*it;
}

void VectorStore::validate() const {
    for (size_t i = 0; i < records.size(); ++i) {
        const StoreRecord& rec = records[i];
        if (i > 0 && records[i - 1].id >= rec.id)
            throw std::runtime_error("store records out of order at index " +
                                     std::to_string(i));
        if (rec.id >= kRuleCount)
            throw std::runtime_error("store rule id out of range: " +
                                     std::to_string(rec.id));
        float even = 0, odd = 0;
        for (int d = 0; d < 36; ++d) {
            if (rec.v[size_t(d)] < 0 || rec.v[size_t(36 + d)] < 0)
                throw std::runtime_error("negative component in rule " +
                                         std::to_string(rec.id));
            even += rec.v[size_t(d)];
            odd += rec.v[size_t(36 + d)];
        }
        if (std::abs(even - 1.0f) > kHalfSumTolerance ||
            std::abs(odd - 1.0f) > kHalfSumTolerance)
            throw std::runtime_error("half sums not normalized for rule " +
                                     std::to_string(rec.id));
    }
}

void store_write_stream(const VectorStore& store, std::ostream& out) {
    out.write(kMagic, 4);
    put<uint8_t>(out, kVersion);
    put<uint8_t>(out, 0);  // reserved
    put<uint16_t>(out, 72);
    put<uint8_t>(out, 4);  // float width
    put<uint32_t>(out, uint32_t(store.records.size()));
    put<uint64_t>(out, store.global_seed);
    put<double>(out, store.params.density_lo);
    put<double>(out, store.params.density_hi);
    put<uint64_t>(out, store.params.initial_size);
    put<uint64_t>(out, store.params.num_steps);
    put<uint64_t>(out, store.params.num_samples);
    put<uint64_t>(out, store.params.num_trials);
    for (const StoreRecord& rec : store.records) {
        put<uint32_t>(out, rec.id);
        out.write(reinterpret_cast<const char*>(rec.v.data()),
                  sizeof(float) * 72);
    }
}

VectorStore store_read_stream(std::istream& in, const std::string& name) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error(name + ": not a CAVS store file");
    if (get<uint8_t>(in, name) != kVersion)
        throw std::runtime_error(name + ": unsupported store version");
    get<uint8_t>(in, name);  // reserved
    if (get<uint16_t>(in, name) != 72)
        throw std::runtime_error(name + ": unexpected dimension count");
    if (get<uint8_t>(in, name) != 4)
        throw std::runtime_error(name + ": unexpected float width");
    uint32_t count = get<uint32_t>(in, name);
    VectorStore store;
    store.global_seed = get<uint64_t>(in, name);
    store.params.density_lo = get<double>(in, name);
    store.params.density_hi = get<double>(in, name);
    store.params.initial_size = get<uint64_t>(in, name);
    store.params.num_steps = get<uint64_t>(in, name);
    store.params.num_samples = get<uint64_t>(in, name);
    store.params.num_trials = get<uint64_t>(in, name);
    store.records.resize(count);
    for (uint32_t i = 0; i < count; ++i) {
        store.records[i].id = get<uint32_t>(in, name);
        in.read(reinterpret_cast<char*>(store.records[i].v.data()),
                sizeof(float) * 72);
        if (!in) throw std::runtime_error(name + ": truncated store file");
    }
    return store;
}

void store_write(const VectorStore& store, const std::string& path) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error(path + ": cannot open for writing");
        store_write_stream(store, out);
        if (!out) throw std::runtime_error(path + ": write failed");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error(path + ": atomic rename failed");
}

VectorStore store_read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(path + ": cannot open store file");
    return store_read_stream(in, path);
}

VectorStore store_merge(const VectorStore& a, const VectorStore& b) {
    if (!(a.params == b.params) || a.global_seed != b.global_seed)
        throw std::runtime_error(
            "store merge: parameter or seed mismatch between inputs");
    VectorStore out;
    out.params = a.params;
    out.global_seed = a.global_seed;
    out.records.reserve(a.records.size() + b.records.size());
    std::merge(a.records.begin(), a.records.end(), b.records.begin(),
               b.records.end(), std::back_inserter(out.records),
               [](const StoreRecord& x, const StoreRecord& y) {
                   return x.id < y.id;
               });
    for (size_t i = 1; i < out.records.size(); ++i)
        if (out.records[i - 1].id == out.records[i].id)
            throw std::runtime_error("store merge: overlapping rule id " +
                                     std::to_string(out.records[i].id));
    return out;
}

void export_csv(const VectorStore& store, std::ostream& out) {
    out << "rule";
    for (const std::string& label : kDimensionLabels) out << ',' << label;
    out << '\n';
    char buf[32];
    for (const StoreRecord& rec : store.records) {
        out << format_rule(decode(rec.id));
        for (float x : rec.v) {
            std::snprintf(buf, sizeof(buf), ",%.6f", double(x));
            out << buf;
        }
        out << '\n';
    }
}

}  // namespace caatlas
