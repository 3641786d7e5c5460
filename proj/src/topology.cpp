#include "dlr/topology.hpp"

#include <algorithm>

namespace dlr {

std::vector<std::string> Topology::nodes_of_domain(DomainId id) const {
    std::vector<std::string> out;
    for (const auto& n : nodes)
        if (n.domain == id)
            out.push_back(n.id);
    return out;
}

std::vector<std::string> Topology::borders_of_domain(DomainId id) const {
    std::vector<std::string> out;
    for (const auto& n : nodes)
        if (n.domain == id && n.kind == NodeKind::Border)
            out.push_back(n.id);
    return out;
}

std::set<DomainId> Topology::peer_domains(DomainId id) const {
    std::set<DomainId> out;
    for (const auto& l : links) {
        DomainId da = node(l.a).domain, db = node(l.b).domain;
        if (da == id && db != id)
            out.insert(db);
        if (db == id && da != id)
            out.insert(da);
    }
    return out;
}

void Topology::validate() {
    node_index.clear();
    address_owner.clear();
    domain_index.clear();
    adjacency.clear();

    if (domains.empty())
        throw ValidationError("domains: at least one domain required");
    for (size_t i = 0; i < domains.size(); ++i) {
        Domain& d = domains[i];
        if (d.id == kNoDomain)
            throw ValidationError("domains[" + std::to_string(i) + "].id: 0 is reserved");
        if (!domain_index.emplace(d.id, i).second)
            throw ValidationError("domains[" + std::to_string(i) + "].id: duplicate " +
                                  std::to_string(d.id));
        if (d.label.empty())
            d.label = "AS" + std::to_string(d.id);
        if (d.prefixes.empty())
            throw ValidationError("domains[" + std::to_string(i) + "].prefixes: required");
    }
    // Distinct domains may not announce the same prefix.
    std::map<Prefix, DomainId> prefix_owner;
    for (const auto& d : domains)
        for (const auto& p : d.prefixes)
            if (!prefix_owner.emplace(p, d.id).second)
                throw ValidationError("domain prefixes: duplicate " + p.str());
    std::set<std::string> labels;
    for (const auto& d : domains)
        if (!labels.insert(d.label).second)
            throw ValidationError("domains: duplicate label " + d.label);

    if (nodes.empty())
        throw ValidationError("nodes: at least one node required");
    for (size_t i = 0; i < nodes.size(); ++i) {
        const NodeIdentity& n = nodes[i];
        std::string where = "nodes[" + std::to_string(i) + "]";
        if (n.id.empty())
            throw ValidationError(where + ".id: empty");
        if (!node_index.emplace(n.id, i).second)
            throw ValidationError(where + ".id: duplicate " + n.id);
        if (!domain_index.count(n.domain))
            throw ValidationError(where + ".domain: unknown domain " + std::to_string(n.domain));
        if (n.addresses.empty())
            throw ValidationError(where + ".addresses: at least one required");
        const Domain& d = domains[domain_index[n.domain]];
        for (const auto& a : n.addresses) {
            if (!address_owner.emplace(a, n.id).second)
                throw ValidationError(where + ".addresses: duplicate " + a.str());
            bool covered = std::any_of(d.prefixes.begin(), d.prefixes.end(),
                                       [&](const Prefix& p) { return p.contains(a); });
            if (!covered)
                throw ValidationError(where + ".addresses: " + a.str() +
                                      " outside domain prefixes of " + d.label);
        }
    }

    for (size_t i = 0; i < links.size(); ++i) {
        const Link& l = links[i];
        std::string where = "links[" + std::to_string(i) + "]";
        if (!node_index.count(l.a))
            throw ValidationError(where + ".a: unknown node " + l.a);
        if (!node_index.count(l.b))
            throw ValidationError(where + ".b: unknown node " + l.b);
        if (l.a == l.b)
            throw ValidationError(where + ": self loop on " + l.a);
        if (l.latency_us == 0)
            throw ValidationError(where + ".latency_us: must be positive");
        const NodeIdentity& na = node(l.a);
        const NodeIdentity& nb = node(l.b);
        if (na.domain != nb.domain &&
            (na.kind != NodeKind::Border || nb.kind != NodeKind::Border))
            throw ValidationError(where + ": inter-domain link requires border endpoints");
        adjacency[l.a].push_back(i);
        adjacency[l.b].push_back(i);
    }
}

} // namespace dlr
