#pragma once

#include <cstddef>
#include <vector>

#include "lwpt/rng.hpp"

namespace lwpt {

// Sum/max segment tree over leaf priorities. Logical capacity is rounded up
// to a power of two internally; unused leaves carry zero mass and are never
// sampled.
class SumTree {
public:
    explicit SumTree(size_t capacity);

    void set(size_t idx, double value);  // value = p^alpha mass at the leaf
    double get(size_t idx) const;
    double total() const { return sums_[1]; }
    double max_value() const { return maxs_[1]; }
    size_t find_prefix(double mass) const;  // leaf holding the given cumulative mass
    size_t capacity() const { return logical_; }

private:
    size_t logical_;
    size_t base_;  // number of leaves (power of two)
    std::vector<double> sums_;
    std::vector<double> maxs_;
};

struct Transition {
    std::vector<double> s;
    std::vector<double> a;  // in [-1,1]^3
    double r = 0.0;         // raw reward; VRC centering happens at target time
    std::vector<double> s_next;
    bool done = false;
    double behavior_logp = 0.0;  // log pi_b(a|s) at collection time (clipped-rho mode)
};

// Prioritized replay keyed by |TD error| with stratified sampling and
// importance-sampling weights. Single-writer, single-sampler.
class ReplayBuffer {
public:
    ReplayBuffer(size_t capacity, double alpha_per, double eps_prior);

    // New items get the current max raw priority (1.0 when empty); the
    // oldest item is overwritten when full. Returns the slot index.
    size_t push(Transition tr);

    struct Sample {
        std::vector<size_t> indices;
        std::vector<const Transition*> items;
        std::vector<double> weights;  // max-normalized, in (0,1]
    };

    // Stratified prioritized draw: one uniform per equal-mass segment.
    Sample sample(size_t batch, double beta_per, Rng& rng) const;

    // Uniform draw with unit weights (PER ablation path).
    Sample sample_uniform(size_t batch, Rng& rng) const;

    // Leaf i <- |delta_i| + eps_prior.
    void update_priorities(const std::vector<size_t>& indices, const std::vector<double>& td_abs);

    size_t size() const { return size_; }
    size_t capacity() const { return capacity_; }
    double priority(size_t idx) const { return raw_priority_[idx]; }
    double tree_total() const { return tree_.total(); }
    double tree_leaf(size_t idx) const { return tree_.get(idx); }

private:
    void set_priority(size_t idx, double raw);

    size_t capacity_;
    double alpha_per_;
    double eps_prior_;
    std::vector<Transition> items_;
    std::vector<double> raw_priority_;
    SumTree tree_;      // masses p^alpha
    SumTree raw_tree_;  // raw priorities, used only for the max rule
    size_t write_ = 0;
    size_t size_ = 0;
};

}  // namespace lwpt
