#ifndef DLR_ADDR_HPP
#define DLR_ADDR_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace dlr {

// 32-bit AS number. Zero is reserved as the "no domain" sentinel and is
// rejected by topology validation; the wire codec itself carries any value.
using DomainId = uint32_t;
inline constexpr DomainId kNoDomain = 0;

struct Ipv6Address {
    std::array<uint8_t, 16> bytes{};

    static Ipv6Address from_bytes(const uint8_t* p);
    // Textual forms per RFC 4291 ("2001:db8::1", "::"). No zone ids, no
    // embedded IPv4 dotted quads.
    static std::optional<Ipv6Address> parse(std::string_view text);

    // Canonical lowercase text, longest zero run compressed.
    std::string str() const;

    bool is_unspecified() const;

    auto operator<=>(const Ipv6Address&) const = default;
};

struct Prefix {
    Ipv6Address addr;
    uint8_t length = 0; // 0..128

    static std::optional<Prefix> parse(std::string_view text); // "addr/len"

    bool contains(const Ipv6Address& a) const;
    std::string str() const;

    auto operator<=>(const Prefix&) const = default;
};

} // namespace dlr

#endif
