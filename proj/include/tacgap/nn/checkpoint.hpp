#ifndef TACGAP_NN_CHECKPOINT_HPP
#define TACGAP_NN_CHECKPOINT_HPP

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "tacgap/tensor.hpp"

namespace tacgap::nn {

// Single-file tensor container: magic, JSON header (metadata + tensor
// directory), raw little-endian float32 payload. Round-trips are bitwise.
struct Container {
    nlohmann::json header;
    std::vector<std::pair<std::string, Tensor>> tensors;

    const Tensor* find(const std::string& name) const;
};

void save_container(const std::filesystem::path& path, const nlohmann::json& header,
                    const std::vector<std::pair<std::string, const Tensor*>>& tensors);
Container load_container(const std::filesystem::path& path);

}  // namespace tacgap::nn

#endif
