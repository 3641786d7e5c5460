#ifndef DLR_FORWARDING_HPP
#define DLR_FORWARDING_HPP

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dlr/addr.hpp"
#include "dlr/tables.hpp"
#include "dlr/wire.hpp"

namespace dlr {

enum class NodeKind { Host, Interior, Border };

const char* node_kind_name(NodeKind k);

struct NodeIdentity {
    std::string id;
    NodeKind kind = NodeKind::Host;
    DomainId domain = kNoDomain;
    std::vector<Ipv6Address> addresses; // first entry is the primary/peering address

    bool owns(const Ipv6Address& a) const {
        for (const auto& mine : addresses)
            if (mine == a)
                return true;
        return false;
    }
    const Ipv6Address& primary_address() const { return addresses.front(); }
};

enum class DropReason {
    NoRoute,
    NoRouteToNextDomain,
    HopLimitExceeded,
    Malformed,
    DeadlineInfeasible,
};

const char* drop_reason_name(DropReason r);

struct ForwardTo {
    Ipv6Address next_hop;
    bool operator==(const ForwardTo&) const = default;
};
struct Deliver {
    bool operator==(const Deliver&) const = default;
};
struct Drop {
    DropReason reason;
    bool operator==(const Drop&) const = default;
};

using ForwardingAction = std::variant<ForwardTo, Deliver, Drop>;

struct EmptyPathError : std::runtime_error {
    EmptyPathError() : std::runtime_error("empty domain path") {}
};

// Wraps the packet in a DLSR routing header: the base destination is kept
// (intra-domain routing carries the packet to the egress DBR), the former
// destination goes to the original-destination field, and the path is
// stored reversed with both indices at the last entry.
wire::Packet encapsulate_dlsr(wire::Packet packet, std::span<const DomainId> path,
                              std::vector<wire::TlvOption> options);

wire::Packet encapsulate_dbd(wire::Packet packet, std::vector<wire::TlvOption> options);

// DBR processing of a DLSR packet. Triggered when the destination is one
// of the node's addresses (domain ingress) or when the indexed list entry
// names the node's own domain (first-domain egress). A triggered node in
// the last domain restores the original destination; elsewhere it
// rewrites the destination to the next domain's ingress DBR and
// decrements Domains Left. Forwarding then falls through to the FIB.
ForwardingAction dlsr_process(const NodeIdentity& node, const DomainEntryTable& det,
                              const Fib& fib, wire::Packet& packet);

// DBR processing of a DBD packet. Triggered when the destination is one of
// the node's addresses or still equals the original destination
// (first-domain egress). The next domain comes from the FIB entry for the
// original destination; an intra-domain verdict restores the destination.
ForwardingAction dbd_process(const NodeIdentity& node, const DomainEntryTable& det,
                             const Fib& fib, wire::Packet& packet);

// Destination-based forwarding used by hosts and interior routers, and by
// DBRs once routing-header work is done. Decrements the hop limit when
// forwarding.
ForwardingAction interior_forward(const NodeIdentity& node, const Fib& fib,
                                  wire::Packet& packet);

} // namespace dlr

#endif
