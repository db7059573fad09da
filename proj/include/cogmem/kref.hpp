#pragma once
// kref: the universal memory reference URI.
//
//   kref://project/space[/sub...]/item.kind[?r=N][&a=artifact]
//
// Tokens are [A-Za-z0-9._-]+ and never contain '/', '?', '&' or '='.
// The kind is the suffix after the LAST dot of the final path segment,
// so item names may themselves contain dots. Tokens are case-sensitive.
// Validation happens here, at the boundary, exactly once: every other
// module accepts Kref values as already well-formed.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cogmem {

inline constexpr int kMaxSpaceDepth = 8;

struct Kref {
    std::string project;
    std::vector<std::string> space_path;   // 1..8 segments
    std::string item_name;
    std::string kind;                      // no dots
    std::optional<std::int64_t> revision_pin; // >= 1 when present
    std::optional<std::string> artifact_name;

    // Validating factory for programmatic construction. Throws MalformedKref.
    static Kref make(std::string project, std::vector<std::string> space_path,
                     std::string item_name, std::string kind,
                     std::optional<std::int64_t> revision_pin = std::nullopt,
                     std::optional<std::string> artifact_name = std::nullopt);

    // Same reference without pin or artifact (the item-level address).
    Kref base() const;
    // Copy with the given revision pin.
    Kref with_pin(std::int64_t seq) const;

    // Canonical textual form; query keys emitted in fixed order r then a.
    std::string format() const;

    friend bool operator==(const Kref& a, const Kref& b);
    friend bool operator!=(const Kref& a, const Kref& b) { return !(a == b); }
    friend bool operator<(const Kref& a, const Kref& b);
};

// Parse a kref URI. Throws MalformedKref on any violation: missing scheme,
// empty segment, missing kind suffix, bad token characters, non-numeric or
// non-positive r, unknown or duplicate query key, or space depth > 8.
Kref parse_kref(std::string_view text);

bool is_valid_token(std::string_view s);

} // namespace cogmem
