#include "nn/checkpoint.hpp"

#include <cstdint>
#include <fstream>
#include <stdexcept>

namespace treering::nn {

namespace {
constexpr char kMagic[] = "TRCKPT1\n";

void write_u32(std::ofstream& out, std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), sizeof(v)); }

std::uint32_t read_u32(std::ifstream& in) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}
}  // namespace

const Tensor& Checkpoint::get(const std::string& name) const {
    for (const auto& [n, t] : tensors)
        if (n == name) return t;
    throw std::runtime_error("checkpoint: missing tensor " + name);
}

bool Checkpoint::has(const std::string& name) const {
    for (const auto& [n, t] : tensors)
        if (n == name) return true;
    return false;
}

void Checkpoint::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
    out.write(kMagic, 8);
    const std::string m = meta.dump();
    write_u32(out, static_cast<std::uint32_t>(m.size()));
    out.write(m.data(), static_cast<std::streamsize>(m.size()));
    write_u32(out, static_cast<std::uint32_t>(tensors.size()));
    for (const auto& [name, t] : tensors) {
        write_u32(out, static_cast<std::uint32_t>(name.size()));
        out.write(name.data(), static_cast<std::streamsize>(name.size()));
        write_u32(out, static_cast<std::uint32_t>(t.rank()));
        for (int i = 0; i < t.rank(); ++i) write_u32(out, static_cast<std::uint32_t>(t.dim(i)));
        out.write(reinterpret_cast<const char*>(t.data()), static_cast<std::streamsize>(t.size() * sizeof(double)));
    }
    if (!out) throw std::runtime_error("short checkpoint write: " + path);
}

Checkpoint Checkpoint::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read checkpoint: " + path);
    char magic[8];
    in.read(magic, 8);
    if (in.gcount() != 8 || std::string(magic, 8) != kMagic) throw std::runtime_error("bad checkpoint: " + path);
    Checkpoint ck;
    const std::uint32_t mlen = read_u32(in);
    std::string m(mlen, '\0');
    in.read(m.data(), mlen);
    ck.meta = nlohmann::json::parse(m);
    const std::uint32_t nt = read_u32(in);
    for (std::uint32_t i = 0; i < nt; ++i) {
        const std::uint32_t nlen = read_u32(in);
        std::string name(nlen, '\0');
        in.read(name.data(), nlen);
        const std::uint32_t rank = read_u32(in);
        std::vector<int> shape(rank);
        for (std::uint32_t r = 0; r < rank; ++r) shape[r] = static_cast<int>(read_u32(in));
        Tensor t(shape);
        in.read(reinterpret_cast<char*>(t.data()), static_cast<std::streamsize>(t.size() * sizeof(double)));
        if (!in) throw std::runtime_error("truncated checkpoint: " + path);
        ck.tensors.emplace_back(std::move(name), std::move(t));
    }
    return ck;
}

void Checkpoint::add_params(const ParamRefs& params) {
    for (const Param* p : params) add(p->name, p->w);
}

void Checkpoint::restore_params(const ParamRefs& params) const {
    for (Param* p : params) {
        const Tensor& t = get(p->name);
        if (!t.same_shape(p->w)) throw std::runtime_error("checkpoint: shape mismatch for " + p->name);
        p->w = t;
        p->g = Tensor(t.shape());
    }
}

}  // namespace treering::nn
