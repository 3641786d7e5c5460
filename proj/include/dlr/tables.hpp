#ifndef DLR_TABLES_HPP
#define DLR_TABLES_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dlr/addr.hpp"

namespace dlr {

// Maps each peering domain to that domain's ingress DBR address. One entry
// per domain; the first learned or configured address wins.
struct DomainEntryTable {
    std::map<DomainId, Ipv6Address> entries;

    std::optional<Ipv6Address> lookup(DomainId domain) const {
        auto it = entries.find(domain);
        if (it == entries.end())
            return std::nullopt;
        return it->second;
    }

    // Returns true when the entry was inserted (domain was absent).
    bool insert_if_absent(DomainId domain, const Ipv6Address& addr) {
        return entries.emplace(domain, addr).second;
    }

    bool operator==(const DomainEntryTable&) const = default;
};

// Merged FIB/NDT record: destination prefix, intra-domain next hop, and
// the next domain toward the destination (none = intra-domain route).
// An unspecified next_hop marks a locally owned prefix.
struct RouteEntry {
    Prefix prefix;
    Ipv6Address next_hop;
    std::optional<DomainId> next_domain;
    std::vector<DomainId> as_path;

    bool is_local() const { return next_hop.is_unspecified(); }

    bool operator==(const RouteEntry&) const = default;
};

class Fib {
public:
    // Replaces any prior entry for the identical prefix.
    void install(const RouteEntry& entry) { routes_[entry.prefix] = entry; }

    // Longest-prefix match; nullptr = no route.
    const RouteEntry* lookup(const Ipv6Address& destination) const {
        const RouteEntry* best = nullptr;
        for (const auto& [prefix, entry] : routes_) {
            if (!prefix.contains(destination))
                continue;
            if (!best || prefix.length > best->prefix.length)
                best = &entry;
        }
        return best;
    }

    const std::map<Prefix, RouteEntry>& routes() const { return routes_; }
    size_t size() const { return routes_.size(); }

    // One line per entry: <prefix> via <next_hop> nd=<next_domain> path=<as_path>
    std::string dump() const;

    bool operator==(const Fib&) const = default;

private:
    std::map<Prefix, RouteEntry> routes_;
};

} // namespace dlr

#endif
