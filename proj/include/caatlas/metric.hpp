#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "caatlas/store.hpp"

namespace caatlas {

// A referenced rule id is absent from the store.
struct MissingRuleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Neighbour {
    RuleId rule = 0;
    double real_distance = 0;
    double boolean_distance = 0;
    int rank = 0;
};

double real_distance(const BehaviourVector& a, const BehaviourVector& b);
double real_distance(const std::array<float, 72>& a,
                     const std::array<float, 72>& b);

// Euclidean distance between the 72-bit Boolean vectors of the two rules'
// emulation plans, divided by sqrt(2). The divisor compensates for the
// duplicated halves of non-strobing plans and reproduces the published
// distance scale.
double boolean_distance(const Rule& r1, const Rule& r2);

// k smallest real distances from the query, sorted by (distance, id).
// Exact brute-force scan.
std::vector<Neighbour> nearest(const VectorStore& store,
                               const BehaviourVector& query, int k);

// Distances of the max_rank nearest entries to the target's own vector.
// Throws std::runtime_error when the target is absent.
std::vector<std::pair<int, double>> rank_curve(const VectorStore& store,
                                               RuleId target, int max_rank);

// Neighbours of the midpoint (v1+v2)/2, excluding r1 and r2.
std::vector<Neighbour> hybrid(const VectorStore& store, RuleId r1, RuleId r2,
                              int k);

// Maximally distant entry; exact ties break toward the lower id.
Neighbour opposite(const VectorStore& store, RuleId target);

struct CentroidResult {
    BehaviourVector mean;
    RuleId nearest_member = 0;
    double distance = 0;
};

CentroidResult centroid(const VectorStore& store,
                        const std::vector<RuleId>& members);

// For each entry, distance to its nearest other entry; the k largest,
// sorted descending (ties ascending by id). O(N^2) blocked scan;
// progress lines go to stderr for large stores.
std::vector<std::pair<RuleId, double>> idiosyncrasy(const VectorStore& store,
                                                    int k);

struct ClusterResult {
    std::vector<int> assignment;                 // parallel to store.records
    std::vector<std::array<double, 72>> centres;
    double objective = 0;  // sum of squared distances to assigned centres
    int iterations = 0;
};

// Seeded k-means++ initialization, Lloyd iterations until assignments
// stabilize or max_iters; empty clusters re-seeded from the farthest
// point. Deterministic for a fixed seed.
ClusterResult cluster(const VectorStore& store, int k, int max_iters,
                      uint64_t seed);

struct Projection {
    RuleId rule = 0;
    double x = 0, y = 0;
};

std::vector<Projection> project_dims(const VectorStore& store, int dim_a,
                                     int dim_b);

// Top-2 principal components of the mean-centred store via power
// iteration with deflation; fixed iteration count, start vectors derived
// from the seed, sign normalized so the largest-magnitude loading is
// positive.
std::vector<Projection> project_pca2(const VectorStore& store, uint64_t seed);

}  // namespace caatlas
