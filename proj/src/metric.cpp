#include "caatlas/metric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "caatlas/rng.hpp"

namespace caatlas {

namespace {

double sq(double x) { return x * x; }

double dist72(const std::array<float, 72>& a, const std::array<float, 72>& b) {
    double s = 0;
    for (size_t i = 0; i < 72; ++i) s += sq(double(a[i]) - double(b[i]));
    return std::sqrt(s);
}

const StoreRecord& require(const VectorStore& store, RuleId id) {
    const StoreRecord* rec = store.find(id);
    if (!rec)
        throw MissingRuleError("rule " + format_rule(decode(id)) +
                               " not present in store");
    return *rec;
}

}  // namespace

double real_distance(const BehaviourVector& a, const BehaviourVector& b) {
    double s = 0;
    for (size_t i = 0; i < 72; ++i) s += sq(a.v[i] - b.v[i]);
    return std::sqrt(s);
}

double real_distance(const std::array<float, 72>& a,
                     const std::array<float, 72>& b) {
    return dist72(a, b);
}

double boolean_distance(const Rule& r1, const Rule& r2) {
    Bool72 a = boolean_vector(classify(r1));
    Bool72 b = boolean_vector(classify(r2));
    int diff = 0;
    for (size_t i = 0; i < 72; ++i) diff += (a[i] != b[i]);
    return std::sqrt(double(diff) / 2.0);
}

std::vector<Neighbour> nearest(const VectorStore& store,
                               const BehaviourVector& query, int k) {
    if (store.records.empty())
        throw std::runtime_error("nearest: store is empty");
    if (k < 1) throw std::invalid_argument("nearest: k must be >= 1");
    std::array<float, 72> q = to_floats(query);
    std::vector<Neighbour> all;
    all.reserve(store.records.size());
    for (const StoreRecord& rec : store.records)
        all.push_back({rec.id, dist72(q, rec.v), 0.0, 0});
    size_t take = std::min<size_t>(size_t(k), all.size());
    std::partial_sort(all.begin(), all.begin() + int64_t(take), all.end(),
                      [](const Neighbour& a, const Neighbour& b) {
                          if (a.real_distance != b.real_distance)
                              return a.real_distance < b.real_distance;
                          return a.rule < b.rule;
                      });
    all.resize(take);
    for (size_t i = 0; i < all.size(); ++i) all[i].rank = int(i) + 1;
    return all;
}

std::vector<std::pair<int, double>> rank_curve(const VectorStore& store,
                                               RuleId target, int max_rank) {
    const StoreRecord& rec = require(store, target);
    std::vector<Neighbour> nn = nearest(store, to_doubles(rec.v), max_rank);
    std::vector<std::pair<int, double>> curve;
    curve.reserve(nn.size());
    for (const Neighbour& n : nn) curve.emplace_back(n.rank, n.real_distance);
    return curve;
}

std::vector<Neighbour> hybrid(const VectorStore& store, RuleId r1, RuleId r2,
                              int k) {
    const StoreRecord& a = require(store, r1);
    const StoreRecord& b = require(store, r2);
    BehaviourVector mid;
    for (size_t i = 0; i < 72; ++i)
        mid.v[i] = (double(a.v[i]) + double(b.v[i])) / 2.0;
    std::vector<Neighbour> nn =
        nearest(store, mid, k + 2);  // room for the excluded endpoints
    std::vector<Neighbour> out;
    for (const Neighbour& n : nn) {
        if (n.rule == r1 || n.rule == r2) continue;
        out.push_back(n);
        out.back().rank = int(out.size());
        if (int(out.size()) == k) break;
    }
    return out;
}

Neighbour opposite(const VectorStore& store, RuleId target) {
    const StoreRecord& rec = require(store, target);
    Neighbour best{target, -1.0, 0.0, 1};
    for (const StoreRecord& other : store.records) {
        double d = dist72(rec.v, other.v);
        if (d > best.real_distance) best = {other.id, d, 0.0, 1};
    }
    return best;
}

CentroidResult centroid(const VectorStore& store,
                        const std::vector<RuleId>& members) {
    if (members.empty())
        throw std::invalid_argument("centroid: member set is empty");
    CentroidResult result;
    for (RuleId id : members) {
        const StoreRecord& rec = require(store, id);
        for (size_t i = 0; i < 72; ++i) result.mean.v[i] += double(rec.v[i]);
    }
    for (double& x : result.mean.v) x /= double(members.size());
    std::array<float, 72> mean_f = to_floats(result.mean);
    double best = -1;
    for (RuleId id : members) {
        double d = dist72(mean_f, store.find(id)->v);
        if (best < 0 || d < best || (d == best && id < result.nearest_member)) {
            best = d;
            result.nearest_member = id;
        }
    }
    result.distance = best;
    return result;
}

std::vector<std::pair<RuleId, double>> idiosyncrasy(const VectorStore& store,
                                                    int k) {
    size_t n = store.records.size();
    if (n < 2) throw std::runtime_error("idiosyncrasy: need at least 2 entries");
    std::vector<double> nn_dist(n, 1e300);
    constexpr size_t kBlock = 4096;
    size_t blocks = (n + kBlock - 1) / kBlock;
    for (size_t bi = 0; bi < blocks; ++bi) {
        size_t i0 = bi * kBlock, i1 = std::min(n, i0 + kBlock);
        #pragma omp parallel for schedule(dynamic, 32)
        for (int64_t i = int64_t(i0); i < int64_t(i1); ++i) {
            double best = 1e300;
            for (size_t j = 0; j < n; ++j) {
                if (size_t(i) == j) continue;
                double d = dist72(store.records[size_t(i)].v,
                                  store.records[j].v);
                if (d < best) best = d;
            }
            nn_dist[size_t(i)] = best;
        }
        if (n > 50000)
            std::fprintf(stderr, "idiosyncrasy: %zu / %zu entries scanned\n",
                         i1, n);
    }
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (nn_dist[a] != nn_dist[b]) return nn_dist[a] > nn_dist[b];
        return store.records[a].id < store.records[b].id;
    });
    std::vector<std::pair<RuleId, double>> out;
    for (size_t i = 0; i < std::min<size_t>(size_t(k), n); ++i)
        out.emplace_back(store.records[order[i]].id, nn_dist[order[i]]);
    return out;
}

ClusterResult cluster(const VectorStore& store, int k, int max_iters,
                      uint64_t seed) {
    size_t n = store.records.size();
    if (k < 1 || size_t(k) > n)
        throw std::invalid_argument("cluster: k must be in [1, entry count]");
    RandomStream stream(mix64(seed));
    ClusterResult result;
    result.centres.reserve(size_t(k));

    auto point = [&](size_t i, size_t dim) {
        return double(store.records[i].v[dim]);
    };
    auto dist2_to = [&](size_t i, const std::array<double, 72>& c) {
        double s = 0;
        for (size_t d = 0; d < 72; ++d) s += sq(point(i, d) - c[d]);
        return s;
    };

    // k-means++ seeding.
    std::array<double, 72> first{};
    size_t pick = size_t(stream.next_below(n));
    for (size_t d = 0; d < 72; ++d) first[d] = point(pick, d);
    result.centres.push_back(first);
    std::vector<double> d2(n);
    for (int c = 1; c < k; ++c) {
        double total = 0;
        for (size_t i = 0; i < n; ++i) {
            double best = 1e300;
            for (const auto& centre : result.centres)
                best = std::min(best, dist2_to(i, centre));
            d2[i] = best;
            total += best;
        }
        size_t chosen = 0;
        if (total > 0) {
            double target = stream.next_double() * total, acc = 0;
            for (size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (acc >= target) {
                    chosen = i;
                    break;
                }
            }
        } else {
            chosen = size_t(stream.next_below(n));
        }
        std::array<double, 72> centre{};
        for (size_t d = 0; d < 72; ++d) centre[d] = point(chosen, d);
        result.centres.push_back(centre);
    }

    result.assignment.assign(n, 0);
    for (int iter = 0; iter < max_iters; ++iter) {
        bool changed = false;
        for (size_t i = 0; i < n; ++i) {
            int best_c = 0;
            double best_d = 1e300;
            for (int c = 0; c < k; ++c) {
                double d = dist2_to(i, result.centres[size_t(c)]);
                if (d < best_d) {
                    best_d = d;
                    best_c = c;
                }
            }
            if (result.assignment[i] != best_c) {
                result.assignment[i] = best_c;
                changed = true;
            }
        }
        result.iterations = iter + 1;
        if (!changed && iter > 0) break;

        std::vector<std::array<double, 72>> sums(
            size_t(k), std::array<double, 72>{});
        std::vector<size_t> counts(size_t(k), 0);
        for (size_t i = 0; i < n; ++i) {
            ++counts[size_t(result.assignment[i])];
            for (size_t d = 0; d < 72; ++d)
                sums[size_t(result.assignment[i])][d] += point(i, d);
        }
        for (int c = 0; c < k; ++c) {
            if (counts[size_t(c)] > 0) {
                for (size_t d = 0; d < 72; ++d)
                    result.centres[size_t(c)][d] =
                        sums[size_t(c)][d] / double(counts[size_t(c)]);
            } else {
                // Re-seed from the point farthest from its assigned centre.
                size_t far_i = 0;
                double far_d = -1;
                for (size_t i = 0; i < n; ++i) {
                    double d = dist2_to(
                        i, result.centres[size_t(result.assignment[i])]);
                    if (d > far_d) {
                        far_d = d;
                        far_i = i;
                    }
                }
                for (size_t d = 0; d < 72; ++d)
                    result.centres[size_t(c)][d] = point(far_i, d);
            }
        }
        if (!changed) break;
    }

    result.objective = 0;
    for (size_t i = 0; i < n; ++i)
        result.objective +=
            dist2_to(i, result.centres[size_t(result.assignment[i])]);
    return result;
}

std::vector<Projection> project_dims(const VectorStore& store, int dim_a,
                                     int dim_b) {
    if (dim_a < 0 || dim_a >= 72 || dim_b < 0 || dim_b >= 72)
        throw std::invalid_argument("projection dimensions must be in [0, 72)");
    std::vector<Projection> out;
    out.reserve(store.records.size());
    for (const StoreRecord& rec : store.records)
        out.push_back({rec.id, double(rec.v[size_t(dim_a)]),
                       double(rec.v[size_t(dim_b)])});
    return out;
}

std::vector<Projection> project_pca2(const VectorStore& store, uint64_t seed) {
    size_t n = store.records.size();
    if (n == 0) throw std::runtime_error("pca2: store is empty");
    std::array<double, 72> mean{};
    for (const StoreRecord& rec : store.records)
        for (size_t d = 0; d < 72; ++d) mean[d] += double(rec.v[d]);
    for (double& x : mean) x /= double(n);

    std::vector<std::array<double, 72>> centred(n);
    for (size_t i = 0; i < n; ++i)
        for (size_t d = 0; d < 72; ++d)
            centred[i][d] = double(store.records[i].v[d]) - mean[d];

    constexpr int kIters = 300;
    RandomStream stream(mix64(seed ^ 0x70CA2ull));
    std::array<std::array<double, 72>, 2> comp{};
    for (int c = 0; c < 2; ++c) {
        std::array<double, 72> w;
        for (double& x : w) x = stream.next_double() - 0.5;
        for (int it = 0; it < kIters; ++it) {
            // w <- X^T X w, orthogonalized against earlier components.
            std::array<double, 72> next{};
            for (size_t i = 0; i < n; ++i) {
                double dot = 0;
                for (size_t d = 0; d < 72; ++d) dot += centred[i][d] * w[d];
                for (size_t d = 0; d < 72; ++d) next[d] += centred[i][d] * dot;
            }
            for (int p = 0; p < c; ++p) {
                double dot = 0;
                for (size_t d = 0; d < 72; ++d) dot += next[d] * comp[size_t(p)][d];
                for (size_t d = 0; d < 72; ++d)
                    next[d] -= dot * comp[size_t(p)][d];
            }
            double norm = 0;
            for (double x : next) norm += x * x;
            norm = std::sqrt(norm);
            if (norm < 1e-300) break;  // degenerate direction
            for (size_t d = 0; d < 72; ++d) w[d] = next[d] / norm;
        }
        // Rank-deficient data leaves w unconverged; force orthogonality
        // to the earlier component and renormalize.
        for (int p = 0; p < c; ++p) {
            double dot = 0;
            for (size_t d = 0; d < 72; ++d) dot += w[d] * comp[size_t(p)][d];
            for (size_t d = 0; d < 72; ++d) w[d] -= dot * comp[size_t(p)][d];
        }
        double wnorm = 0;
        for (double x : w) wnorm += x * x;
        wnorm = std::sqrt(wnorm);
        if (wnorm > 1e-12)
            for (double& x : w) x /= wnorm;
        // Sign convention: largest-magnitude loading positive.
        size_t arg = 0;
        for (size_t d = 1; d < 72; ++d)
            if (std::abs(w[d]) > std::abs(w[arg])) arg = d;
        if (w[arg] < 0)
            for (double& x : w) x = -x;
        comp[size_t(c)] = w;
    }

    std::vector<Projection> out;
    out.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        double x = 0, y = 0;
        for (size_t d = 0; d < 72; ++d) {
            x += centred[i][d] * comp[0][d];
            y += centred[i][d] * comp[1][d];
        }
        out.push_back({store.records[i].id, x, y});
    }
    return out;
}

}  // namespace caatlas
