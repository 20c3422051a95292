#include "tacgap/nn/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include "tacgap/errors.hpp"

namespace tacgap::nn {

namespace {
constexpr char kMagic[8] = {'T', 'G', 'C', 'P', '0', '0', '0', '1'};
}

const Tensor* Container::find(const std::string& name) const {
    for (const auto& [n, t] : tensors)
        if (n == name) return &t;
    return nullptr;
}

void save_container(const std::filesystem::path& path, const nlohmann::json& header,
                    const std::vector<std::pair<std::string, const Tensor*>>& tensors) {
    nlohmann::json full = header;
    full["tensors"] = nlohmann::json::array();
    for (const auto& [name, t] : tensors)
        full["tensors"].push_back(
            {{"name", name}, {"shape", {t->n, t->c, t->h, t->w}}});
    const std::string hdr = full.dump();

    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write checkpoint: " + path.string());
    out.write(kMagic, sizeof(kMagic));
    const std::uint64_t hlen = hdr.size();
    out.write(reinterpret_cast<const char*>(&hlen), sizeof(hlen));
    out.write(hdr.data(), static_cast<std::streamsize>(hdr.size()));
    for (const auto& [name, t] : tensors)
        out.write(reinterpret_cast<const char*>(t->data()),
                  static_cast<std::streamsize>(t->size() * sizeof(float)));
    if (!out) throw DataError("write failed: " + path.string());
}

Container load_container(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open checkpoint: " + path.string());
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw DataError("not a checkpoint container: " + path.string());
    std::uint64_t hlen = 0;
    in.read(reinterpret_cast<char*>(&hlen), sizeof(hlen));
    if (!in || hlen > (1ull << 30)) throw DataError("corrupt checkpoint header: " + path.string());
    std::string hdr(hlen, '\0');
    in.read(hdr.data(), static_cast<std::streamsize>(hlen));
    Container c;
    try {
        c.header = nlohmann::json::parse(hdr);
    } catch (const nlohmann::json::exception& e) {
        throw DataError("corrupt checkpoint header in " + path.string() + ": " + e.what());
    }
    if (!c.header.contains("tensors"))
        throw DataError("checkpoint missing tensor directory: " + path.string());
    for (const auto& e : c.header.at("tensors")) {
        const auto shape = e.at("shape");
        Tensor t(shape.at(0).get<int>(), shape.at(1).get<int>(), shape.at(2).get<int>(),
                 shape.at(3).get<int>());
        in.read(reinterpret_cast<char*>(t.data()),
                static_cast<std::streamsize>(t.size() * sizeof(float)));
        if (!in) throw DataError("truncated checkpoint payload: " + path.string());
        c.tensors.emplace_back(e.at("name").get<std::string>(), std::move(t));
    }
    return c;
}

}  // namespace tacgap::nn
