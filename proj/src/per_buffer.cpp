#include "lwpt/per_buffer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lwpt {

SumTree::SumTree(size_t capacity) : logical_(capacity) {
    if (capacity == 0) throw std::invalid_argument("SumTree: zero capacity");
    base_ = 1;
    while (base_ < capacity) base_ <<= 1;
    sums_.assign(2 * base_, 0.0);
    maxs_.assign(2 * base_, 0.0);
}

void SumTree::set(size_t idx, double value) {
    if (idx >= logical_) throw std::out_of_range("SumTree::set");
    size_t node = base_ + idx;
    sums_[node] = value;
    maxs_[node] = value;
    for (node >>= 1; node >= 1; node >>= 1) {
        sums_[node] = sums_[2 * node] + sums_[2 * node + 1];
        maxs_[node] = std::max(maxs_[2 * node], maxs_[2 * node + 1]);
    }
}

double SumTree::get(size_t idx) const {
    if (idx >= logical_) throw std::out_of_range("SumTree::get");
    return sums_[base_ + idx];
}

size_t SumTree::find_prefix(double mass) const {
    size_t node = 1;
    while (node < base_) {
        double left = sums_[2 * node];
        if (mass < left) {
            node = 2 * node;
        } else {
            mass -= left;
            node = 2 * node + 1;
        }
    }
    size_t idx = node - base_;
    return std::min(idx, logical_ - 1);
}

ReplayBuffer::ReplayBuffer(size_t capacity, double alpha_per, double eps_prior)
    : capacity_(capacity),
      alpha_per_(alpha_per),
      eps_prior_(eps_prior),
      items_(capacity),
      raw_priority_(capacity, 0.0),
      tree_(capacity),
      raw_tree_(capacity) {
    if (eps_prior <= 0.0) throw std::invalid_argument("ReplayBuffer: eps_prior must be > 0");
}

void ReplayBuffer::set_priority(size_t idx, double raw) {
    raw_priority_[idx] = raw;
    raw_tree_.set(idx, raw);
    tree_.set(idx, std::pow(raw, alpha_per_));
}

size_t ReplayBuffer::push(Transition tr) {
    size_t idx = write_;
    items_[idx] = std::move(tr);
    double p = size_ == 0 ? 1.0 : std::max(raw_tree_.max_value(), eps_prior_);
    set_priority(idx, p);
    write_ = (write_ + 1) % capacity_;
    size_ = std::min(size_ + 1, capacity_);
    return idx;
}

ReplayBuffer::Sample ReplayBuffer::sample(size_t batch, double beta_per, Rng& rng) const {
    if (size_ < batch) throw std::underflow_error("ReplayBuffer::sample: not enough items");
    double total = tree_.total();
    Sample out;
    out.indices.reserve(batch);
    out.items.reserve(batch);
    out.weights.reserve(batch);
    double n = static_cast<double>(size_);
    double max_w = 0.0;
    for (size_t k = 0; k < batch; ++k) {
        double mass = (static_cast<double>(k) + rng.uniform01()) * total / static_cast<double>(batch);
        size_t idx = tree_.find_prefix(mass);
        double prob = tree_.get(idx) / total;
        double w = std::pow(1.0 / (n * prob), beta_per);
        out.indices.push_back(idx);
        out.items.push_back(&items_[idx]);
        out.weights.push_back(w);
        max_w = std::max(max_w, w);
    }
    for (double& w : out.weights) w /= max_w;
    return out;
}

ReplayBuffer::Sample ReplayBuffer::sample_uniform(size_t batch, Rng& rng) const {
    if (size_ < batch) throw std::underflow_error("ReplayBuffer::sample_uniform: not enough items");
    Sample out;
    for (size_t k = 0; k < batch; ++k) {
        size_t idx = static_cast<size_t>(rng.below(size_));
        out.indices.push_back(idx);
        out.items.push_back(&items_[idx]);
        out.weights.push_back(1.0);
    }
    return out;
}

void ReplayBuffer::update_priorities(const std::vector<size_t>& indices,
                                     const std::vector<double>& td_abs) {
    if (indices.size() != td_abs.size())
        throw std::invalid_argument("update_priorities: length mismatch");
    for (size_t k = 0; k < indices.size(); ++k) {
        if (indices[k] >= size_) throw std::out_of_range("update_priorities: bad index");
        set_priority(indices[k], std::abs(td_abs[k]) + eps_prior_);
    }
}

}  // namespace lwpt
