#include "dlr/forwarding.hpp"

#include <algorithm>

namespace dlr {

const char* node_kind_name(NodeKind k) {
    switch (k) {
    case NodeKind::Host: return "host";
    case NodeKind::Interior: return "interior";
    case NodeKind::Border: return "border";
    }
    return "unknown";
}

const char* drop_reason_name(DropReason r) {
    switch (r) {
    case DropReason::NoRoute: return "NoRoute";
    case DropReason::NoRouteToNextDomain: return "NoRouteToNextDomain";
    case DropReason::HopLimitExceeded: return "HopLimitExceeded";
    case DropReason::Malformed: return "Malformed";
    case DropReason::DeadlineInfeasible: return "DeadlineInfeasible";
    }
    return "unknown";
}

wire::Packet encapsulate_dlsr(wire::Packet packet, std::span<const DomainId> path,
                              std::vector<wire::TlvOption> options) {
    if (path.empty())
        throw EmptyPathError();
    wire::DlsrHeader rh;
    rh.next_header = packet.base.next_header;
    rh.original_destination = packet.base.destination;
    rh.domain_list.assign(path.rbegin(), path.rend());
    rh.domains_left = rh.first_domain();
    rh.options = std::move(options);
    packet.base.next_header = wire::kProtoRoutingHeader;
    packet.rh = std::move(rh);
    return packet;
}

wire::Packet encapsulate_dbd(wire::Packet packet, std::vector<wire::TlvOption> options) {
    wire::DbdHeader rh;
    rh.next_header = packet.base.next_header;
    rh.original_destination = packet.base.destination;
    rh.options = std::move(options);
    packet.base.next_header = wire::kProtoRoutingHeader;
    packet.rh = std::move(rh);
    return packet;
}

ForwardingAction interior_forward(const NodeIdentity& node, const Fib& fib,
                                  wire::Packet& packet) {
    if (node.owns(packet.base.destination))
        return Deliver{};
    const RouteEntry* e = fib.lookup(packet.base.destination);
    if (!e || e->is_local())
        return Drop{DropReason::NoRoute};
    if (packet.base.hop_limit <= 1) {
        packet.base.hop_limit = 0;
        return Drop{DropReason::HopLimitExceeded};
    }
    --packet.base.hop_limit;
    return ForwardTo{e->next_hop};
}

ForwardingAction dlsr_process(const NodeIdentity& node, const DomainEntryTable& det,
                              const Fib& fib, wire::Packet& packet) {
    wire::DlsrHeader* rh = packet.dlsr();
    if (!rh || rh->domain_list.empty() || rh->domains_left >= rh->domain_list.size())
        return Drop{DropReason::Malformed};

    uint8_t i = rh->domains_left;
    bool triggered = node.owns(packet.base.destination) || rh->domain_list[i] == node.domain;
    if (triggered) {
        if (i == 0) {
            // Last domain: recover the original packet before delivery.
            packet.base.destination = rh->original_destination;
        } else {
            DomainId next = rh->domain_list[i - 1];
            auto entry_addr = det.lookup(next);
            if (!entry_addr)
                return Drop{DropReason::NoRouteToNextDomain};
            packet.base.destination = *entry_addr;
            rh->domains_left = static_cast<uint8_t>(i - 1);
        }
    }
    return interior_forward(node, fib, packet);
}

ForwardingAction dbd_process(const NodeIdentity& node, const DomainEntryTable& det,
                             const Fib& fib, wire::Packet& packet) {
    wire::DbdHeader* rh = packet.dbd();
    if (!rh)
        return Drop{DropReason::Malformed};

    const Ipv6Address& od = rh->original_destination;
    bool triggered = node.owns(packet.base.destination) || packet.base.destination == od;
    if (triggered) {
        const RouteEntry* e = fib.lookup(od);
        if (!e)
            return Drop{DropReason::NoRoute};
        if (!e->next_domain || *e->next_domain == node.domain) {
            packet.base.destination = od;
        } else {
            auto entry_addr = det.lookup(*e->next_domain);
            if (!entry_addr)
                return Drop{DropReason::NoRouteToNextDomain};
            packet.base.destination = *entry_addr;
        }
    }
    return interior_forward(node, fib, packet);
}

} // namespace dlr
