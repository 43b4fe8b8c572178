#ifndef DUALITY_RNG_HPP
#define DUALITY_RNG_HPP

#include <cstdint>

namespace duality {

/// Identifies one logical random stream. Identical (master_seed, stream_id,
/// event count) reproduce an identical event list bit for bit, on any
/// platform: the generator below is defined exactly, with no reliance on
/// std::<distribution> implementation details.
struct RngStreamSpec {
    std::uint64_t master_seed = 0;
    std::uint32_t stream_id = 0;
};

// Distinct stream ids so basis-policy changes never perturb positions.
inline constexpr std::uint32_t kPositionStream = 0;
inline constexpr std::uint32_t kBasisStream = 1;
inline constexpr std::uint32_t kOutcomeStream = 2;

/// SplitMix64 sequence generator (Steele, Lea, Vigna's mixer).
class Splitmix64 {
  public:
    explicit Splitmix64(std::uint64_t state) : state_(state) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1]; safe as a log() argument.
    double uniform_pos() {
        return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    }

  private:
    std::uint64_t state_;
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace detail

/// Counter-based substream keyed by (master_seed, stream_id, event_index).
/// Every event owns an independent generator, so event lists are identical
/// whether generated serially or partitioned across tasks by index range.
inline Splitmix64 event_stream(const RngStreamSpec& spec, std::uint64_t event_index) {
    std::uint64_t s = detail::mix64(spec.master_seed + 0x9E3779B97F4A7C15ULL);
    s = detail::mix64(s ^ (static_cast<std::uint64_t>(spec.stream_id) + 0xD1B54A32D192ED03ULL));
    s = detail::mix64(s ^ (event_index + 0x8CB92BA72F3D8DD7ULL));
    return Splitmix64(s);
}

} // namespace duality

#endif
