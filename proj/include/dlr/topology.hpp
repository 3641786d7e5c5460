#ifndef DLR_TOPOLOGY_HPP
#define DLR_TOPOLOGY_HPP

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "dlr/addr.hpp"
#include "dlr/forwarding.hpp"

namespace dlr {

struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

struct Domain {
    DomainId id = kNoDomain;
    std::string label; // defaults to "AS<id>"
    std::vector<Prefix> prefixes;
};

struct Link {
    std::string a, b;
    uint32_t latency_us = 0;
    uint32_t jitter_us = 0;
};

// The Fig. 2 style abstraction: domains as virtual routers, DBRs as their
// interfaces, interior nodes as the switch fabric. Inter-domain links are
// peerings and must connect border nodes.
struct Topology {
    std::vector<Domain> domains;
    std::vector<NodeIdentity> nodes;
    std::vector<Link> links;

    // Derived lookups, filled by validate().
    std::map<std::string, size_t> node_index;
    std::map<Ipv6Address, std::string> address_owner;
    std::map<DomainId, size_t> domain_index;
    std::map<std::string, std::vector<size_t>> adjacency; // node id -> link indexes

    const NodeIdentity& node(const std::string& id) const { return nodes.at(node_index.at(id)); }
    const Domain& domain(DomainId id) const { return domains.at(domain_index.at(id)); }
    bool has_domain(DomainId id) const { return domain_index.count(id) != 0; }
    std::string domain_label(DomainId id) const {
        auto it = domain_index.find(id);
        return it == domain_index.end() ? "AS" + std::to_string(id) : domains[it->second].label;
    }
    const NodeIdentity* owner_of(const Ipv6Address& a) const {
        auto it = address_owner.find(a);
        return it == address_owner.end() ? nullptr : &node(it->second);
    }
    bool is_peering_link(const Link& l) const {
        return node(l.a).domain != node(l.b).domain;
    }

    std::vector<std::string> nodes_of_domain(DomainId id) const;
    std::vector<std::string> borders_of_domain(DomainId id) const;
    // Peer domains reachable over one peering link.
    std::set<DomainId> peer_domains(DomainId id) const;

    // Checks structural invariants and fills the derived lookups. Throws
    // ValidationError naming the offending field.
    void validate();
};

} // namespace dlr

#endif
