#include "dlr/control.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <queue>

namespace dlr::control {

namespace {

bool path_better(const std::vector<DomainId>& candidate, const std::vector<DomainId>& best) {
    if (candidate.size() != best.size())
        return candidate.size() < best.size();
    return std::lexicographical_compare(candidate.begin(), candidate.end(), best.begin(),
                                        best.end());
}

bool contains_domain(const std::vector<DomainId>& path, DomainId d) {
    return std::find(path.begin(), path.end(), d) != path.end();
}

} // namespace

RouteUpdate originate(const NodeIdentity& dbr, const Domain& domain, const Prefix& prefix) {
    if (dbr.domain != domain.id)
        throw ValidationError("originate: node " + dbr.id + " is not in domain " + domain.label);
    bool owned = std::any_of(domain.prefixes.begin(), domain.prefixes.end(),
                             [&](const Prefix& p) { return p == prefix; });
    if (!owned)
        throw ValidationError("originate: " + prefix.str() + " not owned by " + domain.label);
    return RouteUpdate{prefix, {dbr.domain}, dbr.primary_address()};
}

std::vector<std::pair<const PeeringSession*, RouteUpdate>>
process_update(DbrState& state, const PeeringSession& via, const RouteUpdate& update) {
    std::vector<std::pair<const PeeringSession*, RouteUpdate>> out;

    if (contains_domain(update.as_path, state.domain))
        return out; // loop prevention
    if (!via.internal && update.as_path.empty())
        return out; // malformed external update, ignore

    RibEntry candidate;
    candidate.as_path = update.as_path;
    candidate.advertiser = update.advertiser_address;
    candidate.source = via.internal
                           ? (update.as_path.empty() ? RouteSource::Local : RouteSource::Internal)
                           : RouteSource::External;

    auto it = state.rib.find(update.prefix);
    if (it != state.rib.end() && !path_better(candidate.as_path, it->second.as_path))
        return out;

    state.rib[update.prefix] = candidate;
    if (!candidate.as_path.empty())
        state.det.insert_if_absent(candidate.as_path.front(), candidate.advertiser);

    for (const auto& s : state.sessions) {
        if (s.local_dbr == via.local_dbr && s.remote_dbr == via.remote_dbr)
            continue; // never echo back
        if (s.internal) {
            // Full-mesh rule: internally learned routes are not re-shared.
            if (candidate.source == RouteSource::Internal)
                continue;
            out.emplace_back(&s, RouteUpdate{update.prefix, candidate.as_path,
                                             candidate.advertiser});
        } else {
            std::vector<DomainId> path;
            path.reserve(candidate.as_path.size() + 1);
            path.push_back(state.domain);
            path.insert(path.end(), candidate.as_path.begin(), candidate.as_path.end());
            out.emplace_back(&s, RouteUpdate{update.prefix, std::move(path), s.local_address});
        }
    }
    return out;
}

std::vector<Origination> default_originations(const Topology& topo) {
    std::vector<Origination> out;
    for (const auto& d : topo.domains) {
        auto borders = topo.borders_of_domain(d.id);
        if (borders.empty())
            continue;
        std::sort(borders.begin(), borders.end());
        for (const auto& p : d.prefixes)
            out.push_back(Origination{borders.front(), p});
    }
    std::sort(out.begin(), out.end(), [](const Origination& a, const Origination& b) {
        return std::tie(a.node, a.prefix) < std::tie(b.node, b.prefix);
    });
    return out;
}

IntraPaths IntraPaths::build(const Topology& topo) {
    IntraPaths out;
    for (const auto& target : topo.nodes) {
        auto& dist = out.dist[target.id];
        // Dijkstra over the intra-domain links of the target's domain.
        using Item = std::pair<uint64_t, std::string>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        dist[target.id] = 0;
        pq.emplace(0, target.id);
        while (!pq.empty()) {
            auto [d, u] = pq.top();
            pq.pop();
            if (d != dist.at(u))
                continue;
            auto adj = topo.adjacency.find(u);
            if (adj == topo.adjacency.end())
                continue;
            for (size_t li : adj->second) {
                const Link& l = topo.links[li];
                const std::string& v = l.a == u ? l.b : l.a;
                if (topo.node(v).domain != target.domain)
                    continue;
                uint64_t nd = d + l.latency_us;
                auto it = dist.find(v);
                if (it == dist.end() || nd < it->second) {
                    dist[v] = nd;
                    pq.emplace(nd, v);
                }
            }
        }
    }
    return out;
}

const NodeIdentity* IntraPaths::first_hop(const Topology& topo, const std::string& from,
                                          const std::string& to) const {
    if (from == to)
        return &topo.node(from);
    auto dit = dist.find(to);
    if (dit == dist.end())
        return nullptr;
    const auto& toward = dit->second;
    const NodeIdentity* best = nullptr;
    uint64_t best_metric = std::numeric_limits<uint64_t>::max();
    auto adj = topo.adjacency.find(from);
    if (adj == topo.adjacency.end())
        return nullptr;
    DomainId domain = topo.node(from).domain;
    for (size_t li : adj->second) {
        const Link& l = topo.links[li];
        const std::string& v = l.a == from ? l.b : l.a;
        const NodeIdentity& vn = topo.node(v);
        if (vn.domain != domain)
            continue;
        auto it = toward.find(v);
        if (it == toward.end())
            continue;
        uint64_t metric = it->second + l.latency_us;
        if (metric < best_metric || (metric == best_metric && best && v < best->id)) {
            best_metric = metric;
            best = &vn;
        }
    }
    return best;
}

bool IntraPaths::reachable(const std::string& from, const std::string& to) const {
    auto dit = dist.find(to);
    return dit != dist.end() && dit->second.count(from) != 0;
}

namespace {

struct SessionKey {
    std::string local, remote;
    bool operator<(const SessionKey& o) const {
        return std::tie(local, remote) < std::tie(o.local, o.remote);
    }
};

} // namespace

Converged converge(const Topology& topo, const std::vector<Origination>& originations) {
    if (topo.node_index.empty())
        throw ValidationError("converge: topology not validated");

    IntraPaths intra = IntraPaths::build(topo);

    // Per-DBR states with external sessions (one per peering link side) and
    // internal sessions to every same-domain DBR.
    std::map<std::string, DbrState> states;
    for (const auto& n : topo.nodes) {
        if (n.kind != NodeKind::Border)
            continue;
        DbrState st;
        st.node = n.id;
        st.domain = n.domain;
        states.emplace(n.id, std::move(st));
    }
    for (const auto& l : topo.links) {
        if (!topo.is_peering_link(l))
            continue;
        const NodeIdentity& na = topo.node(l.a);
        const NodeIdentity& nb = topo.node(l.b);
        states.at(na.id).sessions.push_back(PeeringSession{
            na.id, nb.id, nb.domain, nb.primary_address(), na.primary_address(), false});
        states.at(nb.id).sessions.push_back(PeeringSession{
            nb.id, na.id, na.domain, na.primary_address(), nb.primary_address(), false});
    }
    for (const auto& d : topo.domains) {
        auto borders = topo.borders_of_domain(d.id);
        std::sort(borders.begin(), borders.end());
        for (const auto& a : borders)
            for (const auto& b : borders)
                if (a != b)
                    states.at(a).sessions.push_back(
                        PeeringSession{a, b, d.id, topo.node(b).primary_address(),
                                       topo.node(a).primary_address(), true});
    }
    for (auto& [id, st] : states)
        std::sort(st.sessions.begin(), st.sessions.end(),
                  [](const PeeringSession& a, const PeeringSession& b) {
                      return std::tie(a.internal, a.remote_dbr) <
                             std::tie(b.internal, b.remote_dbr);
                  });

    // Static DET seed from the peering configuration.
    for (auto& [id, st] : states)
        for (const auto& s : st.sessions)
            if (!s.internal)
                st.det.insert_if_absent(s.remote_domain, s.remote_ingress_address);

    // Seed queue with originations.
    struct Message {
        std::string receiver;
        SessionKey via; // session as seen by the receiver
        RouteUpdate update;
    };
    std::deque<Message> current, next;

    auto enqueue = [&](std::deque<Message>& q, const PeeringSession& sender_session,
                       const RouteUpdate& u) {
        q.push_back(Message{sender_session.remote_dbr,
                            SessionKey{sender_session.remote_dbr, sender_session.local_dbr}, u});
    };

    for (const auto& o : originations) {
        auto it = states.find(o.node);
        if (it == states.end())
            throw ValidationError("origination: " + o.node + " is not a border node");
        DbrState& st = it->second;
        // Precondition: the prefix belongs to the originator's domain.
        (void)originate(topo.node(o.node), topo.domain(st.domain), o.prefix);
        st.rib[o.prefix] = RibEntry{{}, Ipv6Address{}, RouteSource::Local};
        for (const auto& s : st.sessions) {
            if (s.internal)
                enqueue(current, s, RouteUpdate{o.prefix, {}, Ipv6Address{}});
            else
                enqueue(current, s, RouteUpdate{o.prefix, {st.domain}, s.local_address});
        }
    }

    size_t max_rounds = 2 * topo.domains.size() + 10;
    size_t round = 0;
    while (!current.empty()) {
        if (++round > max_rounds)
            throw NonConvergence("no fixpoint after " + std::to_string(max_rounds) +
                                 " rounds; " + std::to_string(current.size()) +
                                 " updates still pending");
        while (!current.empty()) {
            Message m = std::move(current.front());
            current.pop_front();
            DbrState& st = states.at(m.receiver);
            const PeeringSession* via = nullptr;
            for (const auto& s : st.sessions)
                if (s.local_dbr == m.via.local && s.remote_dbr == m.via.remote)
                    via = &s;
            if (!via)
                continue;
            for (auto& [session, update] : process_update(st, *via, m.update))
                enqueue(next, *session, update);
        }
        std::swap(current, next);
    }

    // Materialize per-node forwarding state.
    Converged out;
    for (const auto& n : topo.nodes)
        out.fibs[n.id]; // every node gets a table, possibly empty

    // Intra-domain host routes and local prefixes.
    for (const auto& u : topo.nodes) {
        Fib& fib = out.fibs[u.id];
        for (const auto& p : topo.domain(u.domain).prefixes)
            fib.install(RouteEntry{p, Ipv6Address{}, std::nullopt, {}});
        for (const auto& v : topo.nodes) {
            if (v.domain != u.domain || v.id == u.id)
                continue;
            if (!intra.reachable(u.id, v.id))
                continue;
            const NodeIdentity* hop = intra.first_hop(topo, u.id, v.id);
            if (!hop)
                continue;
            for (const auto& a : v.addresses)
                fib.install(RouteEntry{Prefix{a, 128}, hop->primary_address(), std::nullopt, {}});
        }
    }

    // Routes to the peering interfaces of neighbor domains: direct at the
    // peering DBR, toward the nearest such DBR elsewhere in the domain.
    struct PeerTarget {
        const NodeIdentity* remote;
        std::vector<std::string> local_dbrs;
    };
    std::map<DomainId, std::map<std::string, PeerTarget>> peer_targets;
    for (const auto& l : topo.links) {
        if (!topo.is_peering_link(l))
            continue;
        const NodeIdentity& na = topo.node(l.a);
        const NodeIdentity& nb = topo.node(l.b);
        auto& ta = peer_targets[na.domain][nb.id];
        ta.remote = &nb;
        ta.local_dbrs.push_back(na.id);
        auto& tb = peer_targets[nb.domain][na.id];
        tb.remote = &na;
        tb.local_dbrs.push_back(nb.id);
    }
    for (auto& [domain, targets] : peer_targets) {
        for (auto& [remote_id, target] : targets) {
            std::sort(target.local_dbrs.begin(), target.local_dbrs.end());
            for (const auto& u : topo.nodes) {
                if (u.domain != domain)
                    continue;
                // Nearest local DBR that peers with this remote interface.
                const std::string* best = nullptr;
                uint64_t best_dist = std::numeric_limits<uint64_t>::max();
                for (const auto& l : target.local_dbrs) {
                    if (u.id == l) {
                        best = &l;
                        best_dist = 0;
                        break;
                    }
                    if (!intra.reachable(u.id, l))
                        continue;
                    uint64_t d = intra.dist.at(l).at(u.id);
                    if (d < best_dist) {
                        best_dist = d;
                        best = &l;
                    }
                }
                if (!best)
                    continue;
                Ipv6Address next_hop = u.id == *best
                                           ? target.remote->primary_address()
                                           : intra.first_hop(topo, u.id, *best)->primary_address();
                for (const auto& a : target.remote->addresses)
                    out.fibs[u.id].install(RouteEntry{Prefix{a, 128}, next_hop,
                                                      target.remote->domain,
                                                      {target.remote->domain}});
            }
        }
    }

    // External prefixes: per domain, the best path among its DBRs is
    // installed domain-wide, exiting via the DBR that learned it over a
    // peering session.
    for (const auto& d : topo.domains) {
        auto borders = topo.borders_of_domain(d.id);
        std::sort(borders.begin(), borders.end());
        std::set<Prefix> prefixes;
        for (const auto& b : borders)
            for (const auto& [p, e] : states.at(b).rib)
                if (e.source != RouteSource::Local && !e.as_path.empty())
                    prefixes.insert(p);
        for (const auto& p : prefixes) {
            bool owned = std::any_of(d.prefixes.begin(), d.prefixes.end(),
                                     [&](const Prefix& own) { return own == p; });
            if (owned)
                continue;
            const RibEntry* best = nullptr;
            for (const auto& b : borders) {
                auto it = states.at(b).rib.find(p);
                if (it == states.at(b).rib.end() || it->second.as_path.empty())
                    continue;
                if (!best || path_better(it->second.as_path, best->as_path))
                    best = &it->second;
            }
            if (!best)
                continue;
            const std::string* egress = nullptr;
            for (const auto& b : borders) {
                auto it = states.at(b).rib.find(p);
                if (it != states.at(b).rib.end() &&
                    it->second.source == RouteSource::External &&
                    it->second.as_path == best->as_path) {
                    egress = &b;
                    break;
                }
            }
            if (!egress)
                continue;
            const RibEntry& egress_entry = states.at(*egress).rib.at(p);
            for (const auto& u : topo.nodes) {
                if (u.domain != d.id)
                    continue;
                if (u.id == *egress) {
                    out.fibs[u.id].install(RouteEntry{p, egress_entry.advertiser,
                                                      egress_entry.as_path.front(),
                                                      egress_entry.as_path});
                } else if (intra.reachable(u.id, *egress)) {
                    const NodeIdentity* hop = intra.first_hop(topo, u.id, *egress);
                    if (hop)
                        out.fibs[u.id].install(RouteEntry{p, hop->primary_address(),
                                                          egress_entry.as_path.front(),
                                                          egress_entry.as_path});
                }
            }
        }
    }

    for (auto& [id, st] : states) {
        out.dets[id] = st.det;
        out.ribs[id] = st.rib;
    }
    return out;
}

} // namespace dlr::control
