// ca_atlas: behaviour fingerprints and similarity queries for the
// 262,144 semi-totalistic cellular automata.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "caatlas/metric.hpp"
#include "caatlas/rules.hpp"
#include "caatlas/sampling.hpp"
#include "caatlas/store.hpp"
#include "caatlas/sweep.hpp"

using namespace caatlas;

namespace {

// Exit codes: 1 flag errors (CLI11), 2 rule parse / bad arguments,
// 3 store or file errors, 4 rule missing from store.
constexpr int kExitBadArgs = 2;
constexpr int kExitStore = 3;
constexpr int kExitMissingRule = 4;

struct CommonOpts {
    std::string store_path;
    uint64_t seed = 0;
    int jobs = 0;
    std::string format = "table";
    SoupParams params;
};

void add_param_flags(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--density-lo", opts.params.density_lo);
    cmd->add_option("--density-hi", opts.params.density_hi);
    cmd->add_option("--size", opts.params.initial_size);
    cmd->add_option("--num-steps", opts.params.num_steps);
    cmd->add_option("--num-samples", opts.params.num_samples);
    cmd->add_option("--num-trials", opts.params.num_trials);
}

void add_store_flag(CLI::App* cmd, CommonOpts& opts, bool required) {
    auto* opt = cmd->add_option("--store", opts.store_path,
                                "path to a CAVS vector store")
                    ->envname("CA_ATLAS_STORE");
    if (required) opt->required();
}

VectorStore load_store(const CommonOpts& opts) {
    return store_read(opts.store_path);
}

void print_half(const double* v, const char* title) {
    std::printf("%s\n", title);
    const char* rows[4] = {"B  0 to 1", "S  1 to 1", "U  0 to 0", "D  1 to 0"};
    std::printf("  %-10s", "");
    for (int n = 0; n <= 8; ++n) std::printf("%8d", n);
    std::printf("\n");
    for (int t = 0; t < 4; ++t) {
        std::printf("  %-10s", rows[t]);
        for (int n = 0; n <= 8; ++n) std::printf("%8.4f", v[t * 9 + n]);
        std::printf("\n");
    }
}

void print_vector(const Rule& rule, const EmulationPlan& plan,
                  const BehaviourVector& vec, const std::string& format) {
    if (format == "csv") {
        std::printf("rule");
        for (const auto& label : kDimensionLabels)
            std::printf(",%s", label.c_str());
        std::printf("\n%s", format_rule(rule).c_str());
        for (double x : vec.v) std::printf(",%.6f", x);
        std::printf("\n");
        return;
    }
    std::printf("rule %s  plan %s\n", format_rule(rule).c_str(),
                plan_description(plan).c_str());
    print_half(vec.v.data(), "even half");
    print_half(vec.v.data() + 36, "odd half");
}

std::string plan_change_column(const EmulationPlan& plan) {
    switch (plan.kind) {
        case PlanKind::Plain:
            return "";
        case PlanKind::AntiInfinity:
            return format_rule(plan.run());
        case PlanKind::Strobing:
            return format_rule(plan.even) + " " + format_rule(plan.odd);
    }
    return {};
}

void print_neighbours(const std::vector<Neighbour>& nn, const Rule& target) {
    std::printf("%4s  %-22s %-28s %10s %10s\n", "rank", "rule", "rule change",
                "real", "boolean");
    for (const Neighbour& n : nn) {
        Rule r = decode(n.rule);
        std::printf("%4d  %-22s %-28s %10.4f %10.4f\n", n.rank,
                    format_rule(r).c_str(),
                    plan_change_column(classify(r)).c_str(), n.real_distance,
                    boolean_distance(target, r));
    }
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path, std::ios::trunc);
    if (!file) throw std::runtime_error(path + ": cannot open for writing");
    return file;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"behaviour-space atlas for semi-totalistic cellular automata"};
    app.require_subcommand(1);
    CommonOpts opts;

    // vector
    std::string rule_str;
    auto* cmd_vector = app.add_subcommand(
        "vector", "estimate the behaviour vector of one rule");
    cmd_vector->add_option("rule", rule_str)->required();
    cmd_vector->add_option("--seed", opts.seed);
    cmd_vector->add_option("--format", opts.format)
        ->check(CLI::IsMember({"table", "csv"}));
    add_param_flags(cmd_vector, opts);

    // sweep
    SweepSpec sweep_spec;
    std::string shard_str = "0/1";
    auto* cmd_sweep = app.add_subcommand(
        "sweep", "compute vectors for a rule id range into a store");
    cmd_sweep->add_option("--out", sweep_spec.out_path)->required();
    cmd_sweep->add_option("--checkpoint", sweep_spec.checkpoint_path);
    cmd_sweep->add_option("--begin", sweep_spec.id_begin);
    cmd_sweep->add_option("--end", sweep_spec.id_end);
    cmd_sweep->add_option("--shard", shard_str, "i/n: keep ids = i mod n");
    cmd_sweep->add_option("--jobs", sweep_spec.jobs);
    cmd_sweep->add_option("--seed", sweep_spec.global_seed);
    cmd_sweep->add_option("--max-records", sweep_spec.max_records,
                          "stop after N new records (testing aid)");
    cmd_sweep->add_option("--density-lo", sweep_spec.params.density_lo);
    cmd_sweep->add_option("--density-hi", sweep_spec.params.density_hi);
    cmd_sweep->add_option("--size", sweep_spec.params.initial_size);
    cmd_sweep->add_option("--num-steps", sweep_spec.params.num_steps);
    cmd_sweep->add_option("--num-samples", sweep_spec.params.num_samples);
    cmd_sweep->add_option("--num-trials", sweep_spec.params.num_trials);

    // near
    std::string target_str;
    int k = 20;
    auto* cmd_near = app.add_subcommand("near", "nearest neighbours of a rule");
    add_store_flag(cmd_near, opts, true);
    cmd_near->add_option("--target", target_str)->required();
    cmd_near->add_option("-k,--k", k);

    // dist
    std::string rule_a, rule_b;
    bool boolean_only = false;
    auto* cmd_dist = app.add_subcommand("dist", "distance between two rules");
    add_store_flag(cmd_dist, opts, false);
    cmd_dist->add_option("rule1", rule_a)->required();
    cmd_dist->add_option("rule2", rule_b)->required();
    cmd_dist->add_flag("--boolean", boolean_only,
                       "print only the Boolean-space distance");

    // curve
    int max_rank = 200;
    std::string out_path;
    auto* cmd_curve =
        app.add_subcommand("curve", "rank/distance curve for a target rule");
    add_store_flag(cmd_curve, opts, true);
    cmd_curve->add_option("--target", target_str)->required();
    cmd_curve->add_option("--max-rank", max_rank);
    cmd_curve->add_option("--out", out_path);

    // hybrid
    auto* cmd_hybrid =
        app.add_subcommand("hybrid", "rules nearest the midpoint of two rules");
    add_store_flag(cmd_hybrid, opts, true);
    cmd_hybrid->add_option("rule1", rule_a)->required();
    cmd_hybrid->add_option("rule2", rule_b)->required();
    cmd_hybrid->add_option("-k,--k", k);

    // opposite
    auto* cmd_opposite =
        app.add_subcommand("opposite", "maximally distant rule");
    add_store_flag(cmd_opposite, opts, true);
    cmd_opposite->add_option("--target", target_str)->required();

    // centroid
    std::vector<std::string> member_strs;
    auto* cmd_centroid = app.add_subcommand(
        "centroid", "mean vector of a rule group and its nearest member");
    add_store_flag(cmd_centroid, opts, true);
    cmd_centroid->add_option("rules", member_strs)->required();

    // unique
    auto* cmd_unique = app.add_subcommand(
        "unique", "rules least like their nearest neighbour");
    add_store_flag(cmd_unique, opts, true);
    cmd_unique->add_option("-k,--k", k);

    // cluster
    int cluster_k = 8, max_iters = 100;
    auto* cmd_cluster = app.add_subcommand("cluster", "k-means over the store");
    add_store_flag(cmd_cluster, opts, true);
    cmd_cluster->add_option("-k,--k", cluster_k);
    cmd_cluster->add_option("--max-iters", max_iters);
    cmd_cluster->add_option("--seed", opts.seed);
    cmd_cluster->add_option("--out", out_path);

    // project
    std::string dims_str;
    bool pca2 = false;
    auto* cmd_project =
        app.add_subcommand("project", "2-D projection of the store");
    add_store_flag(cmd_project, opts, true);
    cmd_project->add_option("--dims", dims_str, "A,B component indices");
    cmd_project->add_flag("--pca2", pca2, "top-2 principal components");
    cmd_project->add_option("--seed", opts.seed);
    cmd_project->add_option("--out", out_path);

    // export
    auto* cmd_export = app.add_subcommand("export", "CSV dump of the store");
    add_store_flag(cmd_export, opts, true);
    cmd_export->add_option("--out", out_path);

    // merge
    std::vector<std::string> merge_inputs;
    std::string merge_out;
    auto* cmd_merge = app.add_subcommand("merge", "merge disjoint store shards");
    cmd_merge->add_option("--out", merge_out)->required();
    cmd_merge->add_option("stores", merge_inputs)->required()->expected(-2);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_vector) {
            Rule rule = parse_rule(rule_str);
            EmulationPlan plan = classify(rule);
            opts.params.validate();
            BehaviourVector vec =
                estimate_vector(plan, opts.params, SeedRecipe{opts.seed});
            print_vector(rule, plan, vec, opts.format);
        } else if (*cmd_sweep) {
            unsigned i = 0, n = 1;
            if (std::sscanf(shard_str.c_str(), "%u/%u", &i, &n) != 2)
                throw std::invalid_argument("--shard expects i/n");
            sweep_spec.shard_index = i;
            sweep_spec.shard_count = n;
            SweepResult r = run_sweep(sweep_spec);
            std::printf("sweep: %llu computed, %llu resumed, %s\n",
                        (unsigned long long)r.computed,
                        (unsigned long long)r.resumed,
                        r.complete ? "complete" : "partial");
            if (!r.complete) return 0;  // durable partial progress
        } else if (*cmd_near) {
            VectorStore store = load_store(opts);
            Rule target = parse_rule(target_str);
            const StoreRecord* rec = store.find(encode(target));
            if (!rec)
                throw MissingRuleError(target_str + " not present in store");
            auto nn = nearest(store, to_doubles(rec->v), k);
            print_neighbours(nn, target);
        } else if (*cmd_dist) {
            Rule r1 = parse_rule(rule_a), r2 = parse_rule(rule_b);
            if (boolean_only) {
                std::printf("%.4f\n", boolean_distance(r1, r2));
            } else {
                if (opts.store_path.empty())
                    throw std::invalid_argument(
                        "real distance needs --store (or use --boolean)");
                VectorStore store = load_store(opts);
                const StoreRecord* a = store.find(encode(r1));
                const StoreRecord* b = store.find(encode(r2));
                if (!a || !b)
                    throw MissingRuleError("rule not present in store");
                std::printf("real %.4f  boolean %.4f\n",
                            real_distance(a->v, b->v),
                            boolean_distance(r1, r2));
            }
        } else if (*cmd_curve) {
            VectorStore store = load_store(opts);
            Rule target = parse_rule(target_str);
            auto curve = rank_curve(store, encode(target), max_rank);
            std::ofstream file;
            std::ostream& out = open_out(file, out_path);
            for (const auto& [rank, d] : curve)
                out << rank << ' ' << std::fixed << d << '\n';
        } else if (*cmd_hybrid) {
            VectorStore store = load_store(opts);
            Rule r1 = parse_rule(rule_a), r2 = parse_rule(rule_b);
            auto nn = hybrid(store, encode(r1), encode(r2), k);
            print_neighbours(nn, r1);
        } else if (*cmd_opposite) {
            VectorStore store = load_store(opts);
            Rule target = parse_rule(target_str);
            Neighbour n = opposite(store, encode(target));
            std::printf("%s  real %.4f  boolean %.4f\n",
                        format_rule(decode(n.rule)).c_str(), n.real_distance,
                        boolean_distance(target, decode(n.rule)));
        } else if (*cmd_centroid) {
            VectorStore store = load_store(opts);
            std::vector<RuleId> members;
            for (const auto& s : member_strs)
                members.push_back(encode(parse_rule(s)));
            CentroidResult c = centroid(store, members);
            std::printf("nearest member %s  distance %.4f\n",
                        format_rule(decode(c.nearest_member)).c_str(),
                        c.distance);
            print_half(c.mean.v.data(), "centroid even half");
            print_half(c.mean.v.data() + 36, "centroid odd half");
        } else if (*cmd_unique) {
            VectorStore store = load_store(opts);
            for (const auto& [id, d] : idiosyncrasy(store, k))
                std::printf("%-22s %10.4f\n",
                            format_rule(decode(id)).c_str(), d);
        } else if (*cmd_cluster) {
            VectorStore store = load_store(opts);
            ClusterResult r = cluster(store, cluster_k, max_iters, opts.seed);
            std::ofstream file;
            std::ostream& out = open_out(file, out_path);
            for (size_t i = 0; i < store.records.size(); ++i)
                out << format_rule(decode(store.records[i].id)) << ' '
                    << r.assignment[i] << '\n';
            std::fprintf(stderr, "k-means: objective %.6f after %d iterations\n",
                         r.objective, r.iterations);
        } else if (*cmd_project) {
            VectorStore store = load_store(opts);
            std::vector<Projection> points;
            if (pca2) {
                points = project_pca2(store, opts.seed);
            } else {
                int a = -1, b = -1;
                if (std::sscanf(dims_str.c_str(), "%d,%d", &a, &b) != 2)
                    throw std::invalid_argument(
                        "project needs --dims A,B or --pca2");
                points = project_dims(store, a, b);
            }
            std::ofstream file;
            std::ostream& out = open_out(file, out_path);
            for (const Projection& p : points)
                out << format_rule(decode(p.rule)) << ' ' << p.x << ' ' << p.y
                    << '\n';
        } else if (*cmd_export) {
            VectorStore store = load_store(opts);
            std::ofstream file;
            std::ostream& out = open_out(file, out_path);
            export_csv(store, out);
        } else if (*cmd_merge) {
            VectorStore merged = store_read(merge_inputs[0]);
            for (size_t i = 1; i < merge_inputs.size(); ++i)
                merged = store_merge(merged, store_read(merge_inputs[i]));
            merged.validate();
            store_write(merged, merge_out);
            std::printf("merged %zu stores, %zu records\n", merge_inputs.size(),
                        merged.records.size());
        }
    } catch (const MissingRuleError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitMissingRule;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitBadArgs;
    } catch (const std::out_of_range& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitBadArgs;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitStore;
    }
    return 0;
}
