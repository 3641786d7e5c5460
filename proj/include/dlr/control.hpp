#ifndef DLR_CONTROL_HPP
#define DLR_CONTROL_HPP

#include <map>
#include <string>
#include <vector>

#include "dlr/tables.hpp"
#include "dlr/topology.hpp"

// Simplified path-vector dissemination between DBRs. Peering links carry
// external sessions (AS path prepended on send); DBRs of one domain share
// routes over internal sessions with the path and the advertiser address
// preserved, which is what lets every DBR of a transit domain confirm DET
// entries for domains it has no direct peering with.

namespace dlr::control {

struct NonConvergence : std::runtime_error {
    explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

struct RouteUpdate {
    Prefix prefix;
    std::vector<DomainId> as_path; // first element = advertising neighbor's domain
    Ipv6Address advertiser_address;

    bool operator==(const RouteUpdate&) const = default;
};

struct PeeringSession {
    std::string local_dbr;
    std::string remote_dbr;
    DomainId remote_domain = kNoDomain;
    Ipv6Address remote_ingress_address;
    Ipv6Address local_address;
    bool internal = false; // same-domain route sharing
};

enum class RouteSource { Local, External, Internal };

struct RibEntry {
    std::vector<DomainId> as_path; // empty = locally originated
    Ipv6Address advertiser;
    RouteSource source = RouteSource::Local;

    bool operator==(const RibEntry&) const = default;
};

struct DbrState {
    std::string node;
    DomainId domain = kNoDomain;
    std::map<Prefix, RibEntry> rib;
    DomainEntryTable det;
    std::vector<PeeringSession> sessions;
};

struct Origination {
    std::string node;
    Prefix prefix;
};

// The update a DBR emits when announcing one of its domain's prefixes.
// Throws ValidationError when the prefix is not owned by the DBR's domain.
RouteUpdate originate(const NodeIdentity& dbr, const Domain& domain, const Prefix& prefix);

// Applies one received update: loop-checked, adopted iff strictly shorter
// or equal length with lexicographically smaller path. Returns the updates
// to propagate, paired with the emitting session.
std::vector<std::pair<const PeeringSession*, RouteUpdate>>
process_update(DbrState& state, const PeeringSession& via, const RouteUpdate& update);

struct Converged {
    std::map<std::string, Fib> fibs;                 // every node
    std::map<std::string, DomainEntryTable> dets;    // border nodes
    std::map<std::string, std::map<Prefix, RibEntry>> ribs; // border nodes

    bool operator==(const Converged&) const = default;
};

// One border node per domain announces all the domain's prefixes.
std::vector<Origination> default_originations(const Topology& topo);

// Runs update exchange to a fixpoint and installs intra-domain routes
// (shortest path by link latency). Deterministic for fixed inputs.
Converged converge(const Topology& topo, const std::vector<Origination>& originations);

inline Converged converge(const Topology& topo) {
    return converge(topo, default_originations(topo));
}

// Intra-domain metric helper shared with the simulator: latency-shortest
// distances from every node of `target`'s domain toward `target`.
struct IntraPaths {
    // dist[target][node] = metric; absent = unreachable
    std::map<std::string, std::map<std::string, uint64_t>> dist;

    static IntraPaths build(const Topology& topo);
    // Neighbor of `from` on the best path toward `to` (same domain).
    const NodeIdentity* first_hop(const Topology& topo, const std::string& from,
                                  const std::string& to) const;
    bool reachable(const std::string& from, const std::string& to) const;
};

} // namespace dlr::control

#endif
