#include "elguard/taxonomy.hpp"

#include "elguard/error.hpp"

#include <algorithm>
#include <string>

namespace elguard {

namespace {
constexpr std::array<std::string_view, kNumClasses> kNames = {
    "clutter", "building", "road", "static_car", "moving_car", "tree", "low_vegetation", "human",
};
}

std::string_view class_name(SemanticClass c) noexcept {
    const auto i = index_of(c);
    return i < kNames.size() ? kNames[i] : std::string_view("unknown");
}

std::optional<SemanticClass> parse_class(std::string_view name) noexcept {
    for (std::size_t i = 0; i < kNames.size(); ++i) {
        if (kNames[i] == name) return static_cast<SemanticClass>(i);
    }
    return std::nullopt;
}

BusyRoadComposite::BusyRoadComposite()
    : BusyRoadComposite({index_of(SemanticClass::Road), index_of(SemanticClass::StaticCar),
                         index_of(SemanticClass::MovingCar)}) {}

BusyRoadComposite::BusyRoadComposite(std::vector<std::uint32_t> members, std::uint32_t classes)
    : members_(std::move(members)) {
    ELGUARD_REQUIRE(!members_.empty(), ErrorCode::InvalidArgument, "busy-road composite must not be empty");
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    for (auto m : members_) {
        ELGUARD_REQUIRE(m < classes && m < mask_.size(), ErrorCode::InvalidArgument,
                        "composite class " + std::to_string(m) + " out of range");
        mask_[m] = true;
    }
}

} // namespace elguard
