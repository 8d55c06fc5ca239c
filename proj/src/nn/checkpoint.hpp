#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "core/tensor.hpp"
#include "nn/layers.hpp"

namespace treering::nn {

// Self-describing checkpoint container: a JSON metadata block (architecture,
// seeds, schedule hash, training config hash, final loss, ...) followed by
// named parameter tensors. Writes are deterministic, so a fixed-seed rerun
// produces a byte-identical file.
struct Checkpoint {
    nlohmann::json meta;
    std::vector<std::pair<std::string, Tensor>> tensors;

    void add(const std::string& name, const Tensor& t) { tensors.emplace_back(name, t); }
    const Tensor& get(const std::string& name) const;
    bool has(const std::string& name) const;

    void save(const std::string& path) const;
    static Checkpoint load(const std::string& path);

    // Store/restore a layer stack through its Param list.
    void add_params(const ParamRefs& params);
    void restore_params(const ParamRefs& params) const;
};

}  // namespace treering::nn
