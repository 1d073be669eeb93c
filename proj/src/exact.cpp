#include "excesslab/exact.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace excesslab {
namespace {

double neg_p_log_p(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

double binary_entropy(double p) { return neg_p_log_p(p) + neg_p_log_p(1.0 - p); }

// Rounding allowance for an entropy sum of magnitude h.
double rounding_slack(double h) { return 1e-12 + 1e-13 * std::abs(h); }

double log2_support(const JointBlockTable& t, unsigned blocks) {
    return blocks * t.blockLength * std::log2(static_cast<double>(std::max(2u, t.alphabetSize)));
}

template <class Key, class Hash>
double grouped_entropy(const std::unordered_map<Key, KahanSum, Hash>& groups) {
    KahanSum h;
    for (const auto& [k, v] : groups) h += neg_p_log_p(v.value());
    return h.value();
}

double joint_entropy_raw(const JointBlockTable& t) {
    KahanSum h;
    for (const auto& e : t.entries) h += neg_p_log_p(e.probability);
    return h.value();
}

double marginal_entropy_raw(const JointBlockTable& t, bool past) {
    std::unordered_map<Block, KahanSum, BlockHash> groups;
    groups.reserve(t.entries.size());
    for (const auto& e : t.entries) groups[past ? e.key.past : e.key.future] += e.probability;
    return grouped_entropy(groups);
}

struct LabeledBlock {
    Label label;
    Block block;
    bool operator==(const LabeledBlock&) const = default;
};
struct LabeledBlockHash {
    std::size_t operator()(const LabeledBlock& x) const { return x.block.hash() ^ (x.label * 0x9E3779B97F4A7C15ull); }
};

// Unnormalized entropies of (Z, past), (Z, future), (Z, past, future) and Z,
// all as sums of -p log p over the table masses.
struct LabeledEntropies {
    double zPast = 0.0, zFuture = 0.0, zJoint = 0.0, z = 0.0;
};

LabeledEntropies labeled_entropies(const JointBlockTable& t, const std::vector<Label>& labels) {
    std::unordered_map<LabeledBlock, KahanSum, LabeledBlockHash> past, future;
    std::unordered_map<Label, KahanSum> zs;
    KahanSum joint;
    for (std::size_t i = 0; i < t.entries.size(); ++i) {
        const auto& e = t.entries[i];
        past[{labels[i], e.key.past}] += e.probability;
        future[{labels[i], e.key.future}] += e.probability;
        zs[labels[i]] += e.probability;
        joint += neg_p_log_p(e.probability);
    }
    return {grouped_entropy(past), grouped_entropy(future), joint.value(), grouped_entropy(zs)};
}

std::vector<Label> split_labels(const JointBlockTable& t, const SplitLabel& label) {
    std::vector<Label> labels(t.entries.size());
    for (std::size_t i = 0; i < t.entries.size(); ++i) {
        const auto& key = t.entries[i].key;
        const Label a = label.fromPast(key.past);
        const Label b = label.fromFuture(key.future);
        if (a != b)
            throw LabelDisagreement("label disagreement on (" + key.past.to_string() + ", " + key.future.to_string() +
                                    "): past gives " + std::to_string(a) + ", future gives " + std::to_string(b));
        labels[i] = a;
    }
    return labels;
}

MIResult cmi_from_labels(const JointBlockTable& t, const std::vector<Label>& labels) {
    const LabeledEntropies h = labeled_entropies(t, labels);
    // sum_z w_z I_z with I_z on the renormalized sub-table equals
    // H(Z,P) + H(Z,F) - H(Z,P,F) - H(Z) in unnormalized masses.
    const double value = h.zPast + h.zFuture - h.zJoint - h.z;
    const double err = 4.0 * missing_mass_entropy_bound(t.missing_mass(), log2_support(t, 2)) +
                       rounding_slack(h.zPast + h.zFuture + h.zJoint);
    return {value, value >= 0 ? std::min(err, value) : err, err};
}

}  // namespace

double JointBlockTable::entry_mass() const {
    KahanSum s;
    for (const auto& e : entries) s += e.probability;
    return s.value();
}

JointBlockTable JointBlockTable::from_entries(unsigned blockLength, unsigned alphabetSize, std::vector<TableEntry> raw,
                                              double prunedMass, double massUncertainty) {
    for (const auto& e : raw) {
        if (e.key.past.size() != blockLength || e.key.future.size() != blockLength)
            throw std::invalid_argument("from_entries: block length mismatch");
        if (!(e.probability >= 0.0)) throw std::invalid_argument("from_entries: negative probability");
    }
    std::sort(raw.begin(), raw.end(), [](const TableEntry& a, const TableEntry& b) { return a.key < b.key; });
    JointBlockTable t;
    t.blockLength = blockLength;
    t.alphabetSize = alphabetSize;
    t.prunedMass = prunedMass;
    t.massUncertainty = massUncertainty;
    for (const auto& e : raw) {
        if (e.probability == 0.0) continue;
        if (!t.entries.empty() && t.entries.back().key == e.key)
            t.entries.back().probability += e.probability;
        else
            t.entries.push_back(e);
    }
    return t;
}

double missing_mass_entropy_bound(double missing, double log2Support) {
    if (!(missing > 0.0)) return 0.0;
    // Beyond this the continuity bound is no better than the trivial range.
    if (missing >= 0.25) return log2Support + 1.0;
    return std::min(missing * (log2Support + 1e-9) + 2.0 * binary_entropy(missing), log2Support + 1.0);
}

MIResult entropy(const JointBlockTable& table, Marginal which) {
    double h = 0.0;
    unsigned blocks = 2;
    switch (which) {
        case Marginal::Joint: h = joint_entropy_raw(table); break;
        case Marginal::Past: h = marginal_entropy_raw(table, true); blocks = 1; break;
        case Marginal::Future: h = marginal_entropy_raw(table, false); blocks = 1; break;
    }
    const double err = missing_mass_entropy_bound(table.missing_mass(), log2_support(table, blocks)) + rounding_slack(h);
    return {h, std::min(err, std::max(h, 0.0)), err};
}

MIResult block_mi(const JointBlockTable& table) {
    const MIResult hp = entropy(table, Marginal::Past);
    const MIResult hf = entropy(table, Marginal::Future);
    const MIResult hj = entropy(table, Marginal::Joint);
    const double value = hp.value + hf.value - hj.value;
    const double err = hp.errHigh + hf.errHigh + hj.errHigh;
    return {value, value >= 0 ? std::min(err, value) : err, err};
}

MIResult conditional_mi_given(const JointBlockTable& table, const PairLabel& label) {
    std::vector<Label> labels(table.entries.size());
    for (std::size_t i = 0; i < table.entries.size(); ++i) labels[i] = label(table.entries[i].key);
    return cmi_from_labels(table, labels);
}

MIResult conditional_mi_given(const JointBlockTable& table, const SplitLabel& label) {
    return cmi_from_labels(table, split_labels(table, label));
}

MIResult label_entropy(const JointBlockTable& table, const SplitLabel& label) {
    const std::vector<Label> labels = split_labels(table, label);
    std::unordered_map<Label, KahanSum> zs;
    for (std::size_t i = 0; i < labels.size(); ++i) zs[labels[i]] += table.entries[i].probability;
    const double h = grouped_entropy(zs);
    const double err = missing_mass_entropy_bound(table.missing_mass(), log2_support(table, 1)) + rounding_slack(h);
    return {h, std::min(err, std::max(h, 0.0)), err};
}

double triple_information(const JointBlockTable& table, const PairEvent& event) {
    const double total = table.entry_mass();
    if (total <= 0.0) return 0.0;
    auto normalized_mi = [&](double mass, double hp, double hf, double hj) {
        return (hp + hf - hj) / mass + std::log2(mass);
    };
    const double whole = normalized_mi(total, marginal_entropy_raw(table, true), marginal_entropy_raw(table, false),
                                       joint_entropy_raw(table));
    std::vector<Label> labels(table.entries.size());
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = event(table.entries[i].key) ? 1 : 0;
    // Conditional part: sum_b (w_b / total) I_b.
    const LabeledEntropies h = labeled_entropies(table, labels);
    const double conditional = (h.zPast + h.zFuture - h.zJoint - h.z) / total;
    return whole - conditional;
}

}  // namespace excesslab
