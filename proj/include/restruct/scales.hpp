#pragma once

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "restruct/errors.hpp"

namespace restruct {

/// Outcome of comparing two estimates on a partial order.
enum class dominance { equal, dominates, dominated_by, incomparable };

inline const char* to_string(dominance d) {
    switch (d) {
        case dominance::equal: return "equal";
        case dominance::dominates: return "dominates";
        case dominance::dominated_by: return "dominated-by";
        case dominance::incomparable: return "incomparable";
    }
    return "?";
}

/// Ordinal rank on a scale [1..k]; 1 is the best level.
struct ordinal_value {
    int level = 1;
    int levels = 1; // k

    ordinal_value() = default;
    ordinal_value(int level_, int levels_) : level(level_), levels(levels_) {
        if (levels < 1 || level < 1 || level > levels)
            throw invalid_instance("ordinal_value: level outside [1..k]");
    }
};

/// Pairwise compatibility on a scale [0..l]; l is the best level, 0 means
/// incompatible.
struct compatibility_value {
    int value = 0;
    int best = 1; // l

    compatibility_value() = default;
    compatibility_value(int value_, int best_) : value(value_), best(best_) {
        if (best < 1 || value < 0 || value > best)
            throw invalid_instance("compatibility_value: w outside [0..l]");
    }
};

/// Per-quality-level counts n = (n_1,...,n_k). Attached to a composite
/// solution, n_r counts the chosen alternatives of quality r and the counts
/// sum to the number of system components.
class count_vector {
public:
    count_vector() = default;
    explicit count_vector(std::vector<int> counts) : counts_(std::move(counts)) {
        for (int c : counts_)
            if (c < 0) throw invalid_instance("count_vector: negative count");
    }

    int levels() const { return static_cast<int>(counts_.size()); }
    int total() const { return std::accumulate(counts_.begin(), counts_.end(), 0); }
    int at(int level) const { return counts_.at(static_cast<std::size_t>(level) - 1); }
    const std::vector<int>& counts() const { return counts_; }

    /// Sum of (r-1)*n_r: the number of one-level improvement steps separating
    /// this tally from the all-best tally. Moving one unit from level r to
    /// r-1 lowers it by exactly 1.
    int deficiency() const {
        int d = 0;
        for (std::size_t r = 0; r < counts_.size(); ++r)
            d += static_cast<int>(r) * counts_[r];
        return d;
    }

    friend bool operator==(const count_vector&, const count_vector&) = default;

private:
    std::vector<int> counts_;
};

/// Integrated system-quality estimate N(S) = (w; n_1,...,n_k).
struct quality_vector {
    compatibility_value w;
    count_vector n;

    friend bool operator==(const quality_vector& a, const quality_vector& b) {
        return a.w.value == b.w.value && a.n == b.n;
    }

    std::string str() const {
        std::string s = "(" + std::to_string(w.value) + ";";
        const auto& c = n.counts();
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(c[i]);
        }
        s += ')';
        return s;
    }
};

namespace detail {

inline void require_same_scale(const count_vector& a, const count_vector& b) {
    if (a.levels() != b.levels())
        throw scale_mismatch("count_vector: different level counts");
    if (a.total() != b.total())
        throw scale_mismatch("count_vector: different totals");
}

inline dominance combine(dominance a, dominance b) {
    if (a == dominance::equal) return b;
    if (b == dominance::equal) return a;
    if (a == b) return a;
    return dominance::incomparable;
}

} // namespace detail

/// Prefix-sum domination of per-level counts: a is at least as good as b
/// when every prefix sum of a (best levels first) is >= the prefix sum of b.
inline dominance dominates_counts(const count_vector& a, const count_vector& b) {
    detail::require_same_scale(a, b);
    if (a == b) return dominance::equal;
    bool ge = true, le = true;
    int pa = 0, pb = 0;
    for (int r = 1; r <= a.levels(); ++r) {
        pa += a.at(r);
        pb += b.at(r);
        if (pa < pb) ge = false;
        if (pa > pb) le = false;
    }
    if (ge) return dominance::dominates;
    if (le) return dominance::dominated_by;
    return dominance::incomparable;
}

/// Componentwise order on N(S): compatibility by >= on w, counts by
/// prefix-sum domination.
inline dominance dominates_quality(const quality_vector& a, const quality_vector& b) {
    if (a.w.best != b.w.best)
        throw scale_mismatch("quality_vector: different compatibility scales");
    dominance dw = a.w.value == b.w.value
                       ? dominance::equal
                       : (a.w.value > b.w.value ? dominance::dominates
                                                : dominance::dominated_by);
    return detail::combine(dw, dominates_counts(a.n, b.n));
}

/// Ids whose quality vector no other entry dominates.
template <typename Id>
std::set<Id> pareto_front(const std::vector<std::pair<Id, quality_vector>>& items) {
    if (items.empty()) throw restruct::empty_input("pareto_front: no items");
    std::set<Id> front;
    for (const auto& [id, q] : items) {
        bool dominated = false;
        for (const auto& [other_id, other_q] : items) {
            if (&other_q == &q) continue;
            if (dominates_quality(other_q, q) == dominance::dominates) {
                dominated = true;
                break;
            }
        }
        if (!dominated) front.insert(id);
    }
    return front;
}

/// Number of one-level element improvement steps still needed to match the
/// goal tally; clamped at zero so it can serve as a minimization objective.
inline int element_improvement_steps(const count_vector& n, const count_vector& goal) {
    detail::require_same_scale(n, goal);
    return std::max(0, n.deficiency() - goal.deficiency());
}

/// Compatibility improvement steps up to the goal level, clamped at zero.
inline int compat_improvement_steps(const compatibility_value& w,
                                    const compatibility_value& goal) {
    if (w.best != goal.best)
        throw scale_mismatch("compatibility_value: different scales");
    return std::max(0, goal.value - w.value);
}

} // namespace restruct
