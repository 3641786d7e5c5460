#include "dlr/wire.hpp"

#include <cctype>

namespace dlr::wire {

const char* wire_errc_name(WireErrc c) {
    switch (c) {
    case WireErrc::Truncated: return "Truncated";
    case WireErrc::WrongRoutingType: return "WrongRoutingType";
    case WireErrc::IndexOutOfRange: return "IndexOutOfRange";
    case WireErrc::MalformedTlv: return "MalformedTlv";
    case WireErrc::DomainListTooLong: return "DomainListTooLong";
    case WireErrc::EmptyDomainList: return "EmptyDomainList";
    case WireErrc::OptionTooLong: return "OptionTooLong";
    case WireErrc::BadBaseHeader: return "BadBaseHeader";
    case WireErrc::PayloadLengthMismatch: return "PayloadLengthMismatch";
    case WireErrc::BadHex: return "BadHex";
    }
    return "Unknown";
}

namespace {

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v));
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    out.push_back(static_cast<uint8_t>(v >> 24));
    out.push_back(static_cast<uint8_t>(v >> 16));
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v));
}

uint32_t get_u32(const uint8_t* p) {
    return (static_cast<uint32_t>(p[0]) << 24) | (static_cast<uint32_t>(p[1]) << 16) |
           (static_cast<uint32_t>(p[2]) << 8) | p[3];
}

size_t encoded_option_size(const TlvOption& o) {
    return o.type == kOptPad1 ? 1 : 2 + o.value.size();
}

void append_options(std::vector<uint8_t>& out, const std::vector<TlvOption>& options) {
    for (const auto& o : options) {
        if (o.type == kOptPad1 || o.type == kOptPadN)
            throw WireError(WireErrc::MalformedTlv, "padding options are codec-owned");
        if (o.value.size() > 255)
            throw WireError(WireErrc::OptionTooLong, "option value exceeds 255 bytes");
        out.push_back(o.type);
        out.push_back(static_cast<uint8_t>(o.value.size()));
        out.insert(out.end(), o.value.begin(), o.value.end());
    }
}

void append_padding(std::vector<uint8_t>& out, size_t fixed_offset) {
    size_t pad = (8 - (out.size() - fixed_offset) % 8) % 8;
    if (pad == 1) {
        out.push_back(kOptPad1);
    } else if (pad >= 2) {
        out.push_back(kOptPadN);
        out.push_back(static_cast<uint8_t>(pad - 2));
        out.insert(out.end(), pad - 2, 0);
    }
}

// Options region parse; Pad1/PadN are stripped, everything else kept opaque.
std::vector<TlvOption> parse_options(std::span<const uint8_t> region) {
    std::vector<TlvOption> out;
    size_t cur = 0;
    while (cur < region.size()) {
        uint8_t type = region[cur++];
        if (type == kOptPad1)
            continue;
        if (cur >= region.size())
            throw WireError(WireErrc::MalformedTlv, "option length byte missing");
        uint8_t len = region[cur++];
        if (cur + len > region.size())
            throw WireError(WireErrc::MalformedTlv, "option value overruns header");
        if (type != kOptPadN)
            out.push_back(TlvOption{type, {region.begin() + cur, region.begin() + cur + len}});
        cur += len;
    }
    return out;
}

void check_rh_envelope(std::span<const uint8_t> bytes, uint8_t expected_type) {
    if (bytes.size() < 24)
        throw WireError(WireErrc::Truncated, "routing header shorter than 24 bytes");
    size_t expected = (static_cast<size_t>(bytes[1]) + 1) * 8;
    if (bytes.size() != expected)
        throw WireError(WireErrc::Truncated, "buffer size disagrees with len field");
    if (bytes[2] != expected_type)
        throw WireError(WireErrc::WrongRoutingType, "unexpected routing type");
}

} // namespace

std::vector<uint8_t> encode_dlsr(const DlsrHeader& h) {
    size_t n = h.domain_list.size();
    if (n == 0)
        throw WireError(WireErrc::EmptyDomainList, "domain list is empty");
    if (n > 255)
        throw WireError(WireErrc::DomainListTooLong, "domain list exceeds 255 entries");
    if (h.domains_left >= n)
        throw WireError(WireErrc::IndexOutOfRange, "domains_left exceeds first_domain");

    std::vector<uint8_t> out;
    out.reserve(24 + 4 * n + 16);
    out.push_back(h.next_header);
    out.push_back(0); // len, patched below
    out.push_back(kRoutingTypeDlsr);
    out.push_back(h.domains_left);
    out.push_back(static_cast<uint8_t>(n - 1)); // first domain
    out.insert(out.end(), 3, 0);                // reserved
    out.insert(out.end(), h.original_destination.bytes.begin(),
               h.original_destination.bytes.end());
    for (DomainId d : h.domain_list)
        put_u32(out, d);
    append_options(out, h.options);
    append_padding(out, 0);
    out[1] = static_cast<uint8_t>(out.size() / 8 - 1);
    return out;
}

DlsrHeader decode_dlsr(std::span<const uint8_t> bytes) {
    check_rh_envelope(bytes, kRoutingTypeDlsr);
    uint8_t domains_left = bytes[3];
    uint8_t first_domain = bytes[4];
    size_t n = static_cast<size_t>(first_domain) + 1;
    if (24 + 4 * n > bytes.size())
        throw WireError(WireErrc::IndexOutOfRange, "first_domain exceeds header capacity");
    if (domains_left > first_domain)
        throw WireError(WireErrc::IndexOutOfRange, "domains_left exceeds first_domain");

    DlsrHeader h;
    h.next_header = bytes[0];
    h.domains_left = domains_left;
    h.original_destination = Ipv6Address::from_bytes(bytes.data() + 8);
    h.domain_list.reserve(n);
    for (size_t i = 0; i < n; ++i)
        h.domain_list.push_back(get_u32(bytes.data() + 24 + 4 * i));
    h.options = parse_options(bytes.subspan(24 + 4 * n));
    return h;
}

std::vector<uint8_t> encode_dbd(const DbdHeader& h) {
    std::vector<uint8_t> out;
    out.reserve(24 + 16);
    out.push_back(h.next_header);
    out.push_back(0); // len, patched below
    out.push_back(kRoutingTypeDbd);
    out.insert(out.end(), 5, 0); // reserved, 40 bits
    out.insert(out.end(), h.original_destination.bytes.begin(),
               h.original_destination.bytes.end());
    append_options(out, h.options);
    append_padding(out, 0);
    out[1] = static_cast<uint8_t>(out.size() / 8 - 1);
    return out;
}

DbdHeader decode_dbd(std::span<const uint8_t> bytes) {
    check_rh_envelope(bytes, kRoutingTypeDbd);
    DbdHeader h;
    h.next_header = bytes[0];
    h.original_destination = Ipv6Address::from_bytes(bytes.data() + 8);
    h.options = parse_options(bytes.subspan(24));
    return h;
}

size_t dlsr_overhead(size_t n_domains, const std::vector<TlvOption>& options) {
    size_t body = 24 + 4 * n_domains;
    for (const auto& o : options)
        body += encoded_option_size(o);
    return (body + 7) / 8 * 8;
}

size_t srv6_comparison_length(size_t n_segments) {
    return 8 + 16 * n_segments;
}

std::vector<uint8_t> encode_base(const Ipv6BaseHeader& h) {
    std::vector<uint8_t> out;
    out.reserve(40);
    out.push_back(static_cast<uint8_t>(0x60 | (h.traffic_class >> 4)));
    out.push_back(static_cast<uint8_t>((h.traffic_class << 4) | ((h.flow_label >> 16) & 0x0f)));
    out.push_back(static_cast<uint8_t>(h.flow_label >> 8));
    out.push_back(static_cast<uint8_t>(h.flow_label));
    put_u16(out, h.payload_length);
    out.push_back(h.next_header);
    out.push_back(h.hop_limit);
    out.insert(out.end(), h.source.bytes.begin(), h.source.bytes.end());
    out.insert(out.end(), h.destination.bytes.begin(), h.destination.bytes.end());
    return out;
}

Ipv6BaseHeader decode_base(std::span<const uint8_t> bytes) {
    if (bytes.size() < 40)
        throw WireError(WireErrc::Truncated, "base header shorter than 40 bytes");
    if ((bytes[0] >> 4) != 6)
        throw WireError(WireErrc::BadBaseHeader, "version is not 6");
    Ipv6BaseHeader h;
    h.traffic_class = static_cast<uint8_t>((bytes[0] << 4) | (bytes[1] >> 4));
    h.flow_label = (static_cast<uint32_t>(bytes[1] & 0x0f) << 16) |
                   (static_cast<uint32_t>(bytes[2]) << 8) | bytes[3];
    h.payload_length = static_cast<uint16_t>((bytes[4] << 8) | bytes[5]);
    h.next_header = bytes[6];
    h.hop_limit = bytes[7];
    h.source = Ipv6Address::from_bytes(bytes.data() + 8);
    h.destination = Ipv6Address::from_bytes(bytes.data() + 24);
    return h;
}

std::vector<uint8_t> encode_packet(const Packet& p) {
    std::vector<uint8_t> rh_bytes;
    if (const auto* d = p.dlsr())
        rh_bytes = encode_dlsr(*d);
    else if (const auto* d = p.dbd())
        rh_bytes = encode_dbd(*d);
    else if (const auto* raw = std::get_if<RawRoutingHeader>(&p.rh))
        rh_bytes = raw->bytes;

    if (p.has_rh() && p.base.next_header != kProtoRoutingHeader)
        throw WireError(WireErrc::BadBaseHeader, "routing header present but next_header != 43");
    if (!p.has_rh() && p.base.next_header == kProtoRoutingHeader)
        throw WireError(WireErrc::BadBaseHeader, "next_header 43 without a routing header");

    Ipv6BaseHeader base = p.base;
    size_t after = rh_bytes.size() + p.payload.size();
    if (after > 0xffff)
        throw WireError(WireErrc::PayloadLengthMismatch, "payload exceeds 65535 bytes");
    base.payload_length = static_cast<uint16_t>(after);

    std::vector<uint8_t> out = encode_base(base);
    out.insert(out.end(), rh_bytes.begin(), rh_bytes.end());
    out.insert(out.end(), p.payload.begin(), p.payload.end());
    return out;
}

Packet decode_packet(std::span<const uint8_t> bytes) {
    Packet p;
    p.base = decode_base(bytes);
    if (p.base.payload_length != bytes.size() - 40)
        throw WireError(WireErrc::PayloadLengthMismatch,
                        "payload_length disagrees with buffer size");
    size_t cur = 40;
    if (p.base.next_header == kProtoRoutingHeader) {
        if (bytes.size() < cur + 8)
            throw WireError(WireErrc::Truncated, "routing header truncated");
        size_t rh_size = (static_cast<size_t>(bytes[cur + 1]) + 1) * 8;
        if (bytes.size() < cur + rh_size)
            throw WireError(WireErrc::Truncated, "routing header truncated");
        auto rh = bytes.subspan(cur, rh_size);
        switch (rh[2]) {
        case kRoutingTypeDlsr: p.rh = decode_dlsr(rh); break;
        case kRoutingTypeDbd: p.rh = decode_dbd(rh); break;
        default: p.rh = RawRoutingHeader{{rh.begin(), rh.end()}}; break;
        }
        cur += rh_size;
    }
    p.payload.assign(bytes.begin() + cur, bytes.end());
    return p;
}

std::string to_hex(std::span<const uint8_t> bytes) {
    static const char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (uint8_t b : bytes) {
        out += digits[b >> 4];
        out += digits[b & 0x0f];
    }
    return out;
}

std::vector<uint8_t> from_hex(std::string_view text) {
    std::vector<uint8_t> out;
    int hi = -1;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c)))
            continue;
        int v;
        if (c >= '0' && c <= '9')
            v = c - '0';
        else if (c >= 'a' && c <= 'f')
            v = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F')
            v = c - 'A' + 10;
        else
            throw WireError(WireErrc::BadHex, "non-hex character in dump");
        if (hi < 0) {
            hi = v;
        } else {
            out.push_back(static_cast<uint8_t>((hi << 4) | v));
            hi = -1;
        }
    }
    if (hi >= 0)
        throw WireError(WireErrc::BadHex, "odd number of hex digits");
    return out;
}

} // namespace dlr::wire
