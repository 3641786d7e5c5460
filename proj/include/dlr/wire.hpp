#ifndef DLR_WIRE_HPP
#define DLR_WIRE_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dlr/addr.hpp"

// Wire formats for the two DLR routing-header variants, carried as IPv6
// routing headers (next header 43). All multi-octet fields are big-endian.
//
// DLSR routing header:
//
// 0         8        16        24        32
// +---------+---------+---------+---------+
// | Next Hdr|  Len    | Rt Type |Dom Left |
// +---------+---------+---------+---------+
// |First Dom|         reserved            |
// +---------+-----------------------------+
// |       original destination (128)      |
// +---------------------------------------+
// |  domain id list, reverse order, 32x n |
// +---------------------------------------+
// |  TLV options (+ padding to 8 octets)  |
// +---------------------------------------+
//
// The DBD variant drops the index fields and the domain list: after
// next-header/len/routing-type come 40 reserved bits, the original
// destination, and options.

namespace dlr::wire {

inline constexpr uint8_t kProtoRoutingHeader = 43;
// IANA experimentation codepoints; 4 is taken by SRH.
inline constexpr uint8_t kRoutingTypeDlsr = 253;
inline constexpr uint8_t kRoutingTypeDbd = 254;

inline constexpr uint8_t kOptPad1 = 0;
inline constexpr uint8_t kOptPadN = 1;
inline constexpr uint8_t kOptDeadline = 3;
inline constexpr uint8_t kOptTelemetry = 4;
inline constexpr uint8_t kOptServiceChain = 5;

enum class WireErrc {
    Truncated,
    WrongRoutingType,
    IndexOutOfRange,
    MalformedTlv,
    DomainListTooLong,
    EmptyDomainList,
    OptionTooLong,
    BadBaseHeader,
    PayloadLengthMismatch,
    BadHex,
};

class WireError : public std::runtime_error {
public:
    WireError(WireErrc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    WireErrc code() const { return code_; }

private:
    WireErrc code_;
};

const char* wire_errc_name(WireErrc c);

struct TlvOption {
    uint8_t type = 0;
    std::vector<uint8_t> value;

    bool operator==(const TlvOption&) const = default;
};

struct Ipv6BaseHeader {
    uint8_t traffic_class = 0;
    uint32_t flow_label = 0;      // 20 bits
    uint16_t payload_length = 0;  // octets after the base header
    uint8_t next_header = 59;     // 59 = no next header
    uint8_t hop_limit = 64;
    Ipv6Address source;
    Ipv6Address destination;

    bool operator==(const Ipv6BaseHeader&) const = default;
};

struct DlsrHeader {
    uint8_t next_header = 59; // original upper-layer protocol
    uint8_t domains_left = 0; // index into domain_list
    Ipv6Address original_destination;
    std::vector<DomainId> domain_list; // reverse order: [0] = last domain
    std::vector<TlvOption> options;    // excludes padding

    uint8_t first_domain() const {
        return static_cast<uint8_t>(domain_list.size() - 1);
    }

    bool operator==(const DlsrHeader&) const = default;
};

struct DbdHeader {
    uint8_t next_header = 59;
    Ipv6Address original_destination;
    std::vector<TlvOption> options;

    bool operator==(const DbdHeader&) const = default;
};

// Routing header of a type we do not understand; kept byte-exact.
struct RawRoutingHeader {
    std::vector<uint8_t> bytes;

    bool operator==(const RawRoutingHeader&) const = default;
};

using RoutingHeader = std::variant<std::monostate, DlsrHeader, DbdHeader, RawRoutingHeader>;

struct Packet {
    Ipv6BaseHeader base;
    RoutingHeader rh;
    std::vector<uint8_t> payload;

    bool has_rh() const { return !std::holds_alternative<std::monostate>(rh); }
    DlsrHeader* dlsr() { return std::get_if<DlsrHeader>(&rh); }
    const DlsrHeader* dlsr() const { return std::get_if<DlsrHeader>(&rh); }
    DbdHeader* dbd() { return std::get_if<DbdHeader>(&rh); }
    const DbdHeader* dbd() const { return std::get_if<DbdHeader>(&rh); }

    bool operator==(const Packet&) const = default;
};

std::vector<uint8_t> encode_dlsr(const DlsrHeader& h);
DlsrHeader decode_dlsr(std::span<const uint8_t> bytes);

std::vector<uint8_t> encode_dbd(const DbdHeader& h);
DbdHeader decode_dbd(std::span<const uint8_t> bytes);

// Encoded size of a DLSR routing header: 24 + 4n plus options, rounded up
// to the 8-octet extension-header boundary.
size_t dlsr_overhead(size_t n_domains, const std::vector<TlvOption>& options = {});
// Reference SRH sizing (8 + 16 per segment), for comparison tables only.
size_t srv6_comparison_length(size_t n_segments);

std::vector<uint8_t> encode_base(const Ipv6BaseHeader& h); // 40 bytes
Ipv6BaseHeader decode_base(std::span<const uint8_t> bytes);

// Full-packet codec. encode_packet computes payload_length and requires
// base.next_header == 43 iff a routing header is present.
std::vector<uint8_t> encode_packet(const Packet& p);
Packet decode_packet(std::span<const uint8_t> bytes);

std::string to_hex(std::span<const uint8_t> bytes);
std::vector<uint8_t> from_hex(std::string_view text); // whitespace-insensitive

} // namespace dlr::wire

#endif
