#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace caatlas {

// A semi-totalistic rule Bx/Sy. Digit sets are kept as 9-bit masks,
// bit n set iff neighbour count n is in the set.
struct Rule {
    uint16_t born = 0;     // bits 0..8
    uint16_t survive = 0;  // bits 0..8

    bool operator==(const Rule&) const = default;

    bool has_born(int n) const { return (born >> n) & 1; }
    bool has_survive(int n) const { return (survive >> n) & 1; }
};

constexpr uint32_t kRuleCount = 1u << 18;  // 262,144
constexpr uint16_t kDigitMask = 0x1FF;

// Rule id: bit i set iff i in born, bit 9+i set iff i in survive.
using RuleId = uint32_t;

RuleId encode(const Rule& rule);
Rule decode(RuleId id);  // throws std::out_of_range for id >= kRuleCount

// Parses "B<digits>/S<digits>", case-insensitive, digits 0-8 in any
// order, no repeats. Throws std::invalid_argument with the offending
// position on malformed input.
Rule parse_rule(std::string_view text);

// Canonical form: uppercase B/S, digits ascending.
std::string format_rule(const Rule& rule);

enum class PlanKind { Plain, AntiInfinity, Strobing };

// A rule together with its B0-corrected runnable form(s). For Plain and
// AntiInfinity plans even == odd == the single run rule; Strobing plans
// alternate even/odd. No runnable rule ever contains B0.
struct EmulationPlan {
    Rule original;
    PlanKind kind = PlanKind::Plain;
    Rule even;
    Rule odd;

    const Rule& run() const { return even; }
    bool strobing() const { return kind == PlanKind::Strobing; }
};

EmulationPlan classify(const Rule& rule);

// 72-bit transition-permission vector: even half then odd half, each
// half type-major B0..B8, S0..S8, U0..U8, D0..D8.
using Bool72 = std::array<bool, 72>;

enum TransitionType { kBorn = 0, kSurvive = 1, kUnborn = 2, kDie = 3 };

constexpr int dim_index(int half, int type, int count) {
    return half * 36 + type * 9 + count;
}

Bool72 boolean_vector(const EmulationPlan& plan);

std::string plan_description(const EmulationPlan& plan);

}  // namespace caatlas
