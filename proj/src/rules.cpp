#include "caatlas/rules.hpp"

#include <stdexcept>

namespace caatlas {

namespace {

// Maps a digit set {n} to {8-n}.
uint16_t reverse9(uint16_t mask) {
    uint16_t out = 0;
    for (int n = 0; n <= 8; ++n)
        if ((mask >> n) & 1) out |= uint16_t(1) << (8 - n);
    return out;
}

uint16_t complement9(uint16_t mask) { return uint16_t(~mask) & kDigitMask; }

std::string digits_of(uint16_t mask) {
    std::string out;
    for (int n = 0; n <= 8; ++n)
        if ((mask >> n) & 1) out += char('0' + n);
    return out;
}

uint16_t parse_digit_list(std::string_view text, size_t& pos) {
    uint16_t mask = 0;
    while (pos < text.size() && text[pos] != '/') {
        char c = text[pos];
        if (c < '0' || c > '8')
            throw std::invalid_argument("rule string: invalid character '" +
                                        std::string(1, c) + "' at position " +
                                        std::to_string(pos));
        uint16_t bit = uint16_t(1) << (c - '0');
        if (mask & bit)
            throw std::invalid_argument("rule string: repeated digit '" +
                                        std::string(1, c) + "' at position " +
                                        std::to_string(pos));
        mask |= bit;
        ++pos;
    }
    return mask;
}

}  // namespace

RuleId encode(const Rule& rule) {
    return uint32_t(rule.born) | (uint32_t(rule.survive) << 9);
}

Rule decode(RuleId id) {
    if (id >= kRuleCount)
        throw std::out_of_range("rule id " + std::to_string(id) +
                                " out of range [0, 262144)");
    return Rule{uint16_t(id & kDigitMask), uint16_t((id >> 9) & kDigitMask)};
}

Rule parse_rule(std::string_view text) {
    size_t pos = 0;
    if (pos >= text.size() || (text[pos] != 'B' && text[pos] != 'b'))
        throw std::invalid_argument("rule string: expected 'B' at position " +
                                    std::to_string(pos));
    ++pos;
    Rule rule;
    rule.born = parse_digit_list(text, pos);
    if (pos >= text.size() || text[pos] != '/')
        throw std::invalid_argument("rule string: expected '/' at position " +
                                    std::to_string(pos));
    ++pos;
    if (pos >= text.size() || (text[pos] != 'S' && text[pos] != 's'))
        throw std::invalid_argument("rule string: expected 'S' at position " +
                                    std::to_string(pos));
    ++pos;
    rule.survive = parse_digit_list(text, pos);
    if (pos != text.size())
        throw std::invalid_argument("rule string: trailing input at position " +
                                    std::to_string(pos));
    return rule;
}

std::string format_rule(const Rule& rule) {
    return "B" + digits_of(rule.born) + "/S" + digits_of(rule.survive);
}

EmulationPlan classify(const Rule& rule) {
    EmulationPlan plan;
    plan.original = rule;
    if (!rule.has_born(0)) {
        plan.kind = PlanKind::Plain;
        plan.even = plan.odd = rule;
    } else if (rule.has_survive(8)) {
        // Black/white reversal of the whole grid.
        plan.kind = PlanKind::AntiInfinity;
        plan.even.born = reverse9(complement9(rule.survive));
        plan.even.survive = reverse9(complement9(rule.born));
        plan.odd = plan.even;
    } else {
        // Complement-tracked grid: even generations are stored inverted.
        plan.kind = PlanKind::Strobing;
        plan.even.born = complement9(rule.born);
        plan.even.survive = complement9(rule.survive);
        plan.odd.born = reverse9(rule.survive);
        plan.odd.survive = reverse9(rule.born);
    }
    return plan;
}

Bool72 boolean_vector(const EmulationPlan& plan) {
    Bool72 bits{};
    const Rule* half_rule[2] = {&plan.even, &plan.odd};
    for (int half = 0; half < 2; ++half) {
        const Rule& r = *half_rule[half];
        for (int n = 0; n <= 8; ++n) {
            bits[dim_index(half, kBorn, n)] = r.has_born(n);
            bits[dim_index(half, kSurvive, n)] = r.has_survive(n);
            bits[dim_index(half, kUnborn, n)] = !r.has_born(n);
            bits[dim_index(half, kDie, n)] = !r.has_survive(n);
        }
    }
    return bits;
}

std::string plan_description(const EmulationPlan& plan) {
    switch (plan.kind) {
        case PlanKind::Plain:
            return "plain";
        case PlanKind::AntiInfinity:
            return "anti-infinity " + format_rule(plan.run());
        case PlanKind::Strobing:
            return "anti-strobing even " + format_rule(plan.even) + " odd " +
                   format_rule(plan.odd);
    }
    return {};
}

}  // namespace caatlas
