#pragma once

#include <array>
#include <filesystem>
#include <vector>

namespace vsr {

using Rgba = std::array<double, 4>;

struct TfNode {
    double intensity;
    Rgba rgba;
};

/// Piecewise-linear map from intensity to RGBA.
class TransferFunction {
public:
    /// Nodes must be strictly increasing in intensity, start at 0 and end at 1,
    /// with every component in [0,1].
    explicit TransferFunction(std::vector<TfNode> nodes);

    const std::vector<TfNode>& nodes() const noexcept { return nodes_; }

private:
    std::vector<TfNode> nodes_;
};

/// Linear interpolation between the bracketing control points.
/// Intensities outside [0,1] are clamped.
Rgba tf_lookup(const TransferFunction& tf, double intensity) noexcept;

TransferFunction read_transfer_function(const std::filesystem::path& path);
void write_transfer_function(const std::filesystem::path& path, const TransferFunction& tf);

/// Semi-transparent ramp used by the synthetic scenes.
TransferFunction default_transfer_function();

} // namespace vsr
