#pragma once

#include <cstdint>

namespace seqbayes {

// Counter-based per-path random stream (Philox4x32-10). The stream is fully
// determined by (seed, path_index), so results do not depend on how paths are
// scheduled across workers.
class PathRng {
  public:
    PathRng(std::uint64_t seed, std::uint64_t path_index)
        : key0_(static_cast<std::uint32_t>(seed)),
          key1_(static_cast<std::uint32_t>(seed >> 32)),
          stream_lo_(static_cast<std::uint32_t>(path_index)),
          stream_hi_(static_cast<std::uint32_t>(path_index >> 32)) {}

    // Uniform draw in the open interval (0,1).
    double next_uniform();

    // Standard normal draw (Box-Muller over the uniform stream).
    double next_normal();

  private:
    void refill();

    std::uint32_t key0_, key1_;
    std::uint32_t stream_lo_, stream_hi_;
    std::uint64_t block_counter_ = 0;
    std::uint32_t out_[4] = {0, 0, 0, 0};
    int out_pos_ = 4;            // consumed 32-bit lanes in out_
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

}  // namespace seqbayes
