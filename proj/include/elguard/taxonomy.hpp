#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace elguard {

/// UAVid-style eight-class labeling.
enum class SemanticClass : std::uint8_t {
    Clutter = 0,
    Building = 1,
    Road = 2,
    StaticCar = 3,
    MovingCar = 4,
    Tree = 5,
    LowVegetation = 6,
    Human = 7,
};

inline constexpr std::uint32_t kNumClasses = 8;

/// Default monitor threshold: one eighth, below a uniform guess over 8 classes.
inline constexpr double kDefaultTau = 0.125;

constexpr std::uint8_t index_of(SemanticClass c) noexcept { return static_cast<std::uint8_t>(c); }

std::string_view class_name(SemanticClass c) noexcept;
std::optional<SemanticClass> parse_class(std::string_view name) noexcept;

/// Classes treated together as the fatal "busy road" hazard.
class BusyRoadComposite {
public:
    /// {road, static car, moving car}.
    BusyRoadComposite();
    /// Throws Error(InvalidArgument) on an empty set or an index >= classes.
    BusyRoadComposite(std::vector<std::uint32_t> members, std::uint32_t classes = kNumClasses);

    bool contains(std::uint32_t cls) const noexcept {
        return cls < mask_.size() && mask_[cls];
    }
    const std::vector<std::uint32_t>& members() const noexcept { return members_; }

    friend bool operator==(const BusyRoadComposite& a, const BusyRoadComposite& b) {
        return a.members_ == b.members_;
    }

private:
    std::vector<std::uint32_t> members_;  // sorted, unique
    std::array<bool, 256> mask_{};
};

} // namespace elguard
