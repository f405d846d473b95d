#include "lwpt/param_store.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace lwpt::nn {

Tensor& ParamStore::add(const std::string& name, Tensor init) {
    if (index_.count(name)) throw std::logic_error("ParamStore::add: duplicate name " + name);
    index_[name] = entries_.size();
    Entry e;
    e.name = name;
    e.grad = Tensor::zeros({init.rows(), init.cols()});
    e.m = Tensor::zeros({init.rows(), init.cols()});
    e.v = Tensor::zeros({init.rows(), init.cols()});
    e.value = std::move(init);
    entries_.push_back(std::move(e));
    return entries_.back().value;
}

ParamStore::Entry& ParamStore::entry(const std::string& name) {
    auto it = index_.find(name);
    if (it == index_.end()) throw std::logic_error("ParamStore: unknown parameter " + name);
    return entries_[it->second];
}

const ParamStore::Entry& ParamStore::entry(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw std::logic_error("ParamStore: unknown parameter " + name);
    return entries_[it->second];
}

void ParamStore::zero_grad() {
    for (Entry& e : entries_)
        for (double& g : e.grad.data) g = 0.0;
}

void adam_step(ParamStore& store, double lr, double beta1, double beta2, double eps) {
    store.adam_t += 1;
    double bc1 = 1.0 - std::pow(beta1, static_cast<double>(store.adam_t));
    double bc2 = 1.0 - std::pow(beta2, static_cast<double>(store.adam_t));
    for (ParamStore::Entry& e : store.entries()) {
        for (size_t k = 0; k < e.value.size(); ++k) {
            double g = e.grad.data[k];
            e.m.data[k] = beta1 * e.m.data[k] + (1.0 - beta1) * g;
            e.v.data[k] = beta2 * e.v.data[k] + (1.0 - beta2) * g * g;
            double mhat = e.m.data[k] / bc1;
            double vhat = e.v.data[k] / bc2;
            e.value.data[k] -= lr * mhat / (std::sqrt(vhat) + eps);
        }
    }
}

void soft_update(const ParamStore& online, ParamStore& target, double tau) {
    const auto& src = online.entries();
    auto& dst = target.entries();
    if (src.size() != dst.size()) throw std::logic_error("soft_update: store size mismatch");
    for (size_t i = 0; i < src.size(); ++i) {
        if (src[i].value.size() != dst[i].value.size())
            throw std::logic_error("soft_update: shape mismatch at " + src[i].name);
        for (size_t k = 0; k < src[i].value.size(); ++k)
            dst[i].value.data[k] = tau * src[i].value.data[k] + (1.0 - tau) * dst[i].value.data[k];
    }
}

ParamStore clone_params(const ParamStore& src) {
    ParamStore out;
    for (const auto& e : src.entries()) out.add(e.name, e.value);
    return out;
}

Var TapeSession::param(ParamStore& store, const std::string& name) {
    ParamStore::Entry& e = store.entry(name);
    Var v = tape.leaf(e.value);
    watched_.push_back({v.id, &e});
    return v;
}

void TapeSession::backward(Var loss) {
    tape.backward(loss);
    for (auto& [id, entry] : watched_) {
        const Tensor& g = tape.grad_mut(id);
        for (size_t k = 0; k < g.size(); ++k) entry->grad.data[k] += g.data[k];
    }
}

namespace {

template <typename T>
void write_le(std::ofstream& out, T v) {
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T read_le(std::ifstream& in) {
    unsigned char buf[sizeof(T)];
    in.read(reinterpret_cast<char*>(buf), sizeof(T));
    if (!in) throw std::runtime_error("checkpoint: truncated file");
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return v;
}

}  // namespace

void save_tensors(const std::string& path, const std::vector<std::pair<std::string, Tensor>>& tensors) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("checkpoint: cannot open for write: " + path);
    out.write("LWPT", 4);
    write_le<uint16_t>(out, 1);
    write_le<uint32_t>(out, static_cast<uint32_t>(tensors.size()));
    for (const auto& [name, t] : tensors) {
        write_le<uint16_t>(out, static_cast<uint16_t>(name.size()));
        out.write(name.data(), static_cast<std::streamsize>(name.size()));
        write_le<uint8_t>(out, static_cast<uint8_t>(t.shape.size()));
        for (size_t d : t.shape) write_le<uint32_t>(out, static_cast<uint32_t>(d));
        for (double v : t.data) write_le<double>(out, v);
    }
    if (!out) throw std::runtime_error("checkpoint: write failed: " + path);
}

std::vector<std::pair<std::string, Tensor>> load_tensors(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("checkpoint: cannot open: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "LWPT", 4) != 0)
        throw std::runtime_error("checkpoint: bad magic in " + path);
    uint16_t version = read_le<uint16_t>(in);
    if (version != 1) throw std::runtime_error("checkpoint: unsupported version");
    uint32_t count = read_le<uint32_t>(in);
    std::vector<std::pair<std::string, Tensor>> out;
    out.reserve(count);
    for (uint32_t i = 0; i < count; ++i) {
        uint16_t len = read_le<uint16_t>(in);
        std::string name(len, '\0');
        in.read(name.data(), len);
        uint8_t rank = read_le<uint8_t>(in);
        std::vector<size_t> shape(rank);
        size_t n = 1;
        for (uint8_t d = 0; d < rank; ++d) {
            shape[d] = read_le<uint32_t>(in);
            n *= shape[d];
        }
        Tensor t;
        t.shape = std::move(shape);
        t.data.resize(n);
        for (size_t k = 0; k < n; ++k) t.data[k] = read_le<double>(in);
        out.emplace_back(std::move(name), std::move(t));
    }
    return out;
}

}  // namespace lwpt::nn
