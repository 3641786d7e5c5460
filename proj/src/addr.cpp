#include "dlr/addr.hpp"

#include <charconv>
#include <cstdio>
#include <cstring>
#include <vector>

namespace dlr {

Ipv6Address Ipv6Address::from_bytes(const uint8_t* p) {
    Ipv6Address a;
    std::memcpy(a.bytes.data(), p, 16);
    return a;
}

bool Ipv6Address::is_unspecified() const {
    for (uint8_t b : bytes)
        if (b != 0)
            return false;
    return true;
}

static std::optional<uint16_t> parse_group(std::string_view g) {
    if (g.empty() || g.size() > 4)
        return std::nullopt;
    uint16_t v = 0;
    auto [ptr, ec] = std::from_chars(g.data(), g.data() + g.size(), v, 16);
    if (ec != std::errc() || ptr != g.data() + g.size())
        return std::nullopt;
    return v;
}

std::optional<Ipv6Address> Ipv6Address::parse(std::string_view text) {
    // Split on "::" first; each side is a ':'-separated list of hex groups.
    size_t gap = text.find("::");
    std::string_view head = text, tail;
    bool has_gap = gap != std::string_view::npos;
    if (has_gap) {
        head = text.substr(0, gap);
        tail = text.substr(gap + 2);
        if (tail.find("::") != std::string_view::npos)
            return std::nullopt;
    }

    auto split_groups = [](std::string_view s, std::vector<uint16_t>& out) -> bool {
        if (s.empty())
            return true;
        size_t pos = 0;
        while (true) {
            size_t colon = s.find(':', pos);
            std::string_view g = s.substr(pos, colon == std::string_view::npos ? std::string_view::npos
                                                                               : colon - pos);
            auto v = parse_group(g);
            if (!v)
                return false;
            out.push_back(*v);
            if (colon == std::string_view::npos)
                return true;
            pos = colon + 1;
        }
    };

    std::vector<uint16_t> front, back;
    if (!split_groups(head, front) || !split_groups(tail, back))
        return std::nullopt;

    size_t total = front.size() + back.size();
    if (has_gap ? total >= 8 : total != 8)
        return std::nullopt;

    std::array<uint16_t, 8> groups{};
    for (size_t i = 0; i < front.size(); ++i)
        groups[i] = front[i];
    for (size_t i = 0; i < back.size(); ++i)
        groups[8 - back.size() + i] = back[i];

    Ipv6Address a;
    for (size_t i = 0; i < 8; ++i) {
        a.bytes[2 * i] = static_cast<uint8_t>(groups[i] >> 8);
        a.bytes[2 * i + 1] = static_cast<uint8_t>(groups[i] & 0xff);
    }
    return a;
}

std::string Ipv6Address::str() const {
    std::array<uint16_t, 8> g{};
    for (size_t i = 0; i < 8; ++i)
        g[i] = static_cast<uint16_t>((bytes[2 * i] << 8) | bytes[2 * i + 1]);

    // Longest run of zero groups (length >= 2), leftmost on tie.
    int best_start = -1, best_len = 0;
    for (int i = 0; i < 8;) {
        if (g[i] != 0) {
            ++i;
            continue;
        }
        int j = i;
        while (j < 8 && g[j] == 0)
            ++j;
        if (j - i > best_len) {
            best_start = i;
            best_len = j - i;
        }
        i = j;
    }
    if (best_len < 2)
        best_start = -1;

    std::string out;
    char buf[8];
    for (int i = 0; i < 8;) {
        if (i == best_start) {
            out += (i == 0) ? "::" : ":";
            i += best_len;
            if (i == 8 && out.back() != ':')
                out += ':';
            continue;
        }
        if (!out.empty() && out.back() != ':')
            out += ':';
        std::snprintf(buf, sizeof buf, "%x", g[i]);
        out += buf;
        ++i;
    }
    if (out.empty())
        out = "::";
    return out;
}

std::optional<Prefix> Prefix::parse(std::string_view text) {
    size_t slash = text.find('/');
    if (slash == std::string_view::npos)
        return std::nullopt;
    auto addr = Ipv6Address::parse(text.substr(0, slash));
    if (!addr)
        return std::nullopt;
    std::string_view len_s = text.substr(slash + 1);
    unsigned len = 0;
    auto [ptr, ec] = std::from_chars(len_s.data(), len_s.data() + len_s.size(), len, 10);
    if (ec != std::errc() || ptr != len_s.data() + len_s.size() || len > 128)
        return std::nullopt;
    return Prefix{*addr, static_cast<uint8_t>(len)};
}

bool Prefix::contains(const Ipv6Address& a) const {
    unsigned full = length / 8, rem = length % 8;
    if (std::memcmp(addr.bytes.data(), a.bytes.data(), full) != 0)
        return false;
    if (rem == 0)
        return true;
    uint8_t mask = static_cast<uint8_t>(0xff << (8 - rem));
    return (addr.bytes[full] & mask) == (a.bytes[full] & mask);
}

std::string Prefix::str() const {
    return addr.str() + "/" + std::to_string(length);
}

} // namespace dlr
