#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>

namespace folkmetrics {

// Dense integer handle into one of the index's string tables. Handles are
// assigned in lexicographic order of the underlying identifier, so comparing
// two handles of the same kind compares their identifiers.
template <class Kind>
struct Id {
  std::uint32_t value = 0;

  constexpr Id() = default;
  constexpr explicit Id(std::uint32_t v) : value(v) {}

  constexpr auto operator<=>(const Id&) const = default;
};

struct UserKind;
struct ItemKind;
struct TagKind;

using UserId = Id<UserKind>;
using ItemId = Id<ItemKind>;
using TagId = Id<TagKind>;

}  // namespace folkmetrics

template <class Kind>
struct std::hash<folkmetrics::Id<Kind>> {
  std::size_t operator()(folkmetrics::Id<Kind> id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};
