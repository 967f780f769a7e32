#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "caatlas/sampling.hpp"
#include "caatlas/rules.hpp"

namespace caatlas {

struct StoreRecord {
    RuleId id = 0;
    std::array<float, 72> v{};

    bool operator==(const StoreRecord&) const = default;
};

// Ordered collection of (rule id, behaviour vector) records with a
// bit-exact little-endian file format. Records stay sorted strictly
// ascending by id.
struct VectorStore {
    SoupParams params;
    uint64_t global_seed = 0;
    std::vector<StoreRecord> records;  // sorted, unique ids

    bool operator==(const VectorStore&) const = default;

    // Insertion keeping sort order; throws on duplicate id.
    void insert(RuleId id, const BehaviourVector& vec);
    const StoreRecord* find(RuleId id) const;  // nullptr when absent
    void validate() const;  // sort order, uniqueness, vector invariants
};

std::array<float, 72> to_floats(const BehaviourVector& vec);
BehaviourVector to_doubles(const std::array<float, 72>& v);

// File format errors (magic/version mismatch, truncation, overlap on
// merge) throw std::runtime_error with a description.
void store_write(const VectorStore& store, const std::string& path);
VectorStore store_read(const std::string& path);
VectorStore store_merge(const VectorStore& a, const VectorStore& b);

void store_write_stream(const VectorStore& store, std::ostream& out);
VectorStore store_read_stream(std::istream& in, const std::string& name);

// CSV export: header `rule,<labels>`, canonical rule string, components
// with 6 decimal places.
void export_csv(const VectorStore& store, std::ostream& out);

extern const std::array<std::string, 72> kDimensionLabels;

}  // namespace caatlas
