#include "vsr/transfer_function.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "vsr/error.hpp"

namespace vsr {

using nlohmann::json;

TransferFunction::TransferFunction(std::vector<TfNode> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.size() < 2) throw UsageError("transfer function needs at least 2 nodes");
    if (nodes_.front().intensity != 0.0 || nodes_.back().intensity != 1.0)
        throw UsageError("transfer function must span intensities 0 to 1");
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (i > 0 && !(nodes_[i].intensity > nodes_[i - 1].intensity))
            throw UsageError("transfer function intensities must be strictly increasing");
        for (double c : nodes_[i].rgba)
            if (!(c >= 0.0 && c <= 1.0)) throw UsageError("transfer function rgba outside [0,1]");
    }
}

Rgba tf_lookup(const TransferFunction& tf, double intensity) noexcept {
    const auto& n = tf.nodes();
    const double x = std::clamp(intensity, 0.0, 1.0);
    // First node with intensity > x; the bracketing pair is (it - 1, it).
    auto it = std::upper_bound(n.begin() + 1, n.end() - 1, x,
                               [](double value, const TfNode& node) { return value < node.intensity; });
    const TfNode& a = *(it - 1);
    const TfNode& b = *it;
    const double t = (x - a.intensity) / (b.intensity - a.intensity);
    Rgba out;
    for (int c = 0; c < 4; ++c) out[c] = (1.0 - t) * a.rgba[c] + t * b.rgba[c];
    return out;
}

TransferFunction read_transfer_function(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open transfer function: " + path.string());
    std::vector<TfNode> nodes;
    try {
        json j;
        is >> j;
        if (!j.is_array()) throw FormatError("transfer function must be a JSON list");
        for (const auto& e : j) {
            TfNode node{e.at("intensity").get<double>(), {}};
            const auto& rgba = e.at("rgba");
            if (!rgba.is_array() || rgba.size() != 4) throw FormatError("transfer function rgba must have 4 entries");
            for (int c = 0; c < 4; ++c) node.rgba[c] = rgba[c].get<double>();
            nodes.push_back(node);
        }
    } catch (const json::exception& e) {
        throw FormatError("transfer function: " + std::string(e.what()));
    }
    return TransferFunction(std::move(nodes));
}

void write_transfer_function(const std::filesystem::path& path, const TransferFunction& tf) {
    json j = json::array();
    for (const auto& n : tf.nodes())
        j.push_back({{"intensity", n.intensity}, {"rgba", {n.rgba[0], n.rgba[1], n.rgba[2], n.rgba[3]}}});
    std::ofstream os(path);
    if (!os) throw IoError("cannot write transfer function: " + path.string());
    os << j.dump(2) << '\n';
}

TransferFunction default_transfer_function() {
    return TransferFunction({
        {0.0, {0.0, 0.0, 0.0, 0.0}},
        {0.3, {0.8, 0.4, 0.2, 0.0}},
        {0.6, {1.0, 0.7, 0.5, 0.25}},
        {1.0, {1.0, 1.0, 0.9, 0.8}},
    });
}

} // namespace vsr
