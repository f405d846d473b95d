#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lwpt/tensor.hpp"

namespace lwpt::nn {

// Flat, ordered collection of named parameter tensors with matching
// gradient and Adam-moment slots. Iteration order is insertion order and
// deterministic.
class ParamStore {
public:
    struct Entry {
        std::string name;
        Tensor value;
        Tensor grad;
        Tensor m;  // first moment
        Tensor v;  // second moment
    };

    Tensor& add(const std::string& name, Tensor init);
    Entry& entry(const std::string& name);
    const Entry& entry(const std::string& name) const;
    bool has(const std::string& name) const { return index_.count(name) > 0; }

    void zero_grad();

    std::vector<Entry>& entries() { return entries_; }
    const std::vector<Entry>& entries() const { return entries_; }

    int64_t adam_t = 0;

private:
    std::vector<Entry> entries_;
    std::unordered_map<std::string, size_t> index_;
};

// Standard adaptive-moment update with bias correction; moments persist in
// the store.
void adam_step(ParamStore& store, double lr, double beta1 = 0.9, double beta2 = 0.999,
               double eps = 1e-8);

// target <- tau * online + (1 - tau) * target, elementwise.
void soft_update(const ParamStore& online, ParamStore& target, double tau);

ParamStore clone_params(const ParamStore& src);

// Ties a ParamStore to a fresh Tape for one forward/backward pass.
// backward() accumulates tape gradients into the watched entries.
class TapeSession {
public:
    Tape tape;

    Var param(ParamStore& store, const std::string& name);
    Var input(Tensor value) { return tape.leaf(std::move(value)); }
    void backward(Var loss);

private:
    std::vector<std::pair<int, ParamStore::Entry*>> watched_;
};

// Checkpoint container format: magic "LWPT", u16 version, u32 tensor count,
// then per tensor: u16 name length, UTF-8 name, u8 rank, u32 dims (LE),
// f64 values (LE). Bit-exact round trip.
void save_tensors(const std::string& path, const std::vector<std::pair<std::string, Tensor>>& tensors);
std::vector<std::pair<std::string, Tensor>> load_tensors(const std::string& path);

}  // namespace lwpt::nn
