#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>

namespace fmm {

// Cache/register blocking and machine constants. Defaults are a single Ivy
// Bridge core (E5-2680 v2 at 3.54 GHz).
struct ArchParams {
    std::string name = "ivybridge-1core";
    std::size_t mC = 96;
    std::size_t kC = 256;
    std::size_t nC = 4096;
    std::size_t mR = 8;
    std::size_t nR = 4;
    double peakGflops = 28.32;
    double bandwidthGBs = 59.7;

    // Throws std::invalid_argument unless all sizes are positive, mC % mR == 0,
    // nC % nR == 0, mR, nR <= kMaxRegisterBlock and peak/bandwidth > 0.
    void validate() const;

    bool operator==(const ArchParams&) const = default;
};

inline constexpr std::size_t kMaxRegisterBlock = 16;

// `key = value` lines: name, peak_gflops, bandwidth_gbs, mc, kc, nc, mr, nr.
// `#` comments and blank lines are ignored; unknown keys are rejected.
// Keys absent from the text keep their default value.
ArchParams parse_arch(std::string_view text);
ArchParams load_arch(const std::filesystem::path& path);
std::string serialize_arch(const ArchParams& arch);

}  // namespace fmm
