#include "dlr/sim.hpp"

#include <algorithm>

#include "dlr/forwarding.hpp"
#include "dlr/options.hpp"

namespace dlr::sim {

namespace {

uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

uint32_t residence_us(uint64_t entry_ns, uint64_t now_ns) {
    uint64_t us = (now_ns - entry_ns) / 1000;
    return us > 0xffffffffULL ? 0xffffffffU : static_cast<uint32_t>(us);
}

uint64_t shifted_stamp(uint64_t now_ns, int64_t offset_ns) {
    if (offset_ns >= 0)
        return now_ns + static_cast<uint64_t>(offset_ns);
    uint64_t mag = static_cast<uint64_t>(-offset_ns);
    return mag > now_ns ? 0 : now_ns - mag;
}

} // namespace

Simulation Simulation::build(Scenario scenario) {
    scenario.validate();

    Simulation sim;
    sim.converged_ = scenario.originations.empty()
                         ? control::converge(scenario.topology)
                         : control::converge(scenario.topology, scenario.originations);

    for (const auto& r : scenario.resolver_records)
        sim.path_store_.register_record(scenario.topology, r);

    // DLSR paths must start in the source's domain.
    for (const auto& f : scenario.flows) {
        if (f.mode != FlowMode::Dlsr)
            continue;
        const std::vector<DomainId>* path = &f.path;
        if (path->empty())
            path = &sim.path_store_.query(f.dst_name)->domain_path;
        if (path->empty() || path->front() != scenario.topology.node(f.src_node).domain)
            throw ValidationError("flow " + f.id + ": dlsr path must start in the source domain");
    }

    sim.scenario_ = std::move(scenario);
    for (size_t i = 0; i < sim.scenario_.flows.size(); ++i) {
        const FlowSpec& f = sim.scenario_.flows[i];
        for (uint32_t k = 0; k < f.count; ++k) {
            Event e;
            e.flow_index = static_cast<int>(i);
            e.seq = k;
            sim.schedule(std::move(e), (f.start_us + k * f.interval_us) * 1000);
        }
    }
    return sim;
}

void Simulation::schedule(Event e, uint64_t time_ns) {
    e.time_ns = time_ns;
    e.order = next_order_++;
    queue_.push(std::move(e));
}

uint64_t Simulation::proc_delay_ns(const NodeIdentity& node) const {
    auto it = scenario_.proc_delay_us.find(node_kind_name(node.kind));
    return it == scenario_.proc_delay_us.end() ? 0 : static_cast<uint64_t>(it->second) * 1000;
}

int64_t Simulation::stamp_offset_ns(const NodeIdentity& node, options::StampBoundary b) const {
    auto it = scenario_.clock_offsets.find(node.id);
    if (it == scenario_.clock_offsets.end())
        return 0;
    return b == options::StampBoundary::Ingress ? it->second.ingress_ns : it->second.egress_ns;
}

const Link* Simulation::find_link(const std::string& a, const std::string& b,
                                  size_t* index) const {
    auto adj = scenario_.topology.adjacency.find(a);
    if (adj == scenario_.topology.adjacency.end())
        return nullptr;
    const Link* best = nullptr;
    for (size_t li : adj->second) {
        const Link& l = scenario_.topology.links[li];
        const std::string& other = l.a == a ? l.b : l.a;
        if (other != b)
            continue;
        if (!best || l.latency_us < best->latency_us) {
            best = &l;
            if (index)
                *index = li;
        }
    }
    return best;
}

uint64_t Simulation::link_jitter_ns(size_t link_index) {
    const Link& l = scenario_.topology.links[link_index];
    if (l.jitter_us == 0)
        return 0;
    auto [it, inserted] = jitter_state_.try_emplace(link_index, 0);
    if (inserted) {
        uint64_t seed = scenario_.seed;
        it->second = splitmix64(seed) ^ (0x61c88647ULL * (link_index + 1));
    }
    return (splitmix64(it->second) % (l.jitter_us + 1ULL)) * 1000;
}

trace::TraceRecord Simulation::make_record(const NodeIdentity& node, const InFlight& f,
                                           uint64_t now) const {
    trace::TraceRecord rec;
    rec.time_ns = now;
    rec.node = node.id;
    rec.domain = node.domain;
    rec.domain_label = scenario_.topology.domain_label(node.domain);
    rec.flow = f.meta.flow;
    rec.seq = f.meta.seq;
    rec.destination_before = f.pkt.base.destination;
    if (const auto* rh = f.pkt.dlsr())
        rec.domains_left_before = rh->domains_left;
    return rec;
}

void Simulation::inject(const FlowSpec& flow, uint32_t seq, uint64_t now) {
    const Topology& topo = scenario_.topology;
    const NodeIdentity& src = topo.node(flow.src_node);

    Ipv6Address dst;
    std::vector<DomainId> path = flow.path;
    if (flow.dst) {
        dst = *flow.dst;
    } else {
        const resolver::PathRecord* rec = path_store_.query(flow.dst_name);
        dst = rec->destination;
        if (path.empty())
            path = rec->domain_path;
    }

    wire::Packet pkt;
    pkt.base.source = src.primary_address();
    pkt.base.destination = dst;
    pkt.base.hop_limit = 64;
    pkt.payload.assign(flow.payload_bytes, 0);

    std::vector<wire::TlvOption> opts;
    if (flow.options.deadline_us)
        opts.push_back(options::Deadline{*flow.options.deadline_us, 0}.to_tlv());
    if (flow.options.telemetry_capacity)
        opts.push_back(options::Telemetry{*flow.options.telemetry_capacity, false, {}}.to_tlv());
    if (flow.options.service_chain)
        opts.push_back(options::ServiceChain{flow.options.service_chain->first,
                                             flow.options.service_chain->second}
                           .to_tlv());
    for (const auto& o : flow.options.raw)
        opts.push_back(o);

    if (flow.mode == FlowMode::Dlsr)
        pkt = encapsulate_dlsr(std::move(pkt), path, std::move(opts));
    else if (flow.mode == FlowMode::Dbd)
        pkt = encapsulate_dbd(std::move(pkt), std::move(opts));

    InFlight f;
    f.pkt = std::move(pkt);
    f.meta.flow = flow.id;
    f.meta.seq = seq;
    f.meta.inject_ns = now;
    f.meta.current_domain = src.domain;
    f.meta.visited.push_back(src.domain);

    trace::TraceRecord rec = make_record(src, f, now);
    rec.action = trace::Action::Inject;
    rec.destination_after = f.pkt.base.destination;
    rec.domains_left_after = rec.domains_left_before;
    log_.records.push_back(rec);

    process_at_node(src, f, now);
}

void Simulation::ingress_duties(const NodeIdentity& node, InFlight& f, uint64_t now,
                                bool crossing, trace::TraceRecord& rec, bool& dropped) {
    f.meta.current_domain = node.domain;
    f.meta.domain_entry_ns = now;
    f.meta.accounting_started = true;
    if (crossing) {
        bool revisit = std::find(f.meta.visited.begin(), f.meta.visited.end(), node.domain) !=
                       f.meta.visited.end();
        f.meta.visited.push_back(node.domain);
        if (revisit)
            rec.note += "domain-revisit;";
    }

    std::vector<wire::TlvOption>* opts = nullptr;
    const Ipv6Address* od = &f.pkt.base.destination;
    if (auto* rh = f.pkt.dlsr()) {
        opts = &rh->options;
        od = &rh->original_destination;
    } else if (auto* rh = f.pkt.dbd()) {
        opts = &rh->options;
        od = &rh->original_destination;
    }
    if (!opts)
        return;

    if (const auto* o = options::find_option(*opts, wire::kOptServiceChain)) {
        if (auto sc = options::ServiceChain::from_tlv(*o)) {
            bool hosts = scenario_.service_domains.count(node.domain) != 0;
            if (hosts) {
                auto stepped = options::service_chain_step(*sc, true);
                options::replace_option(*opts, stepped.to_tlv());
                rec.note += stepped.complete ? "sfc-complete;" : "sfc-step;";
            }
        }
    }

    if (const auto* o = options::find_option(*opts, wire::kOptTelemetry)) {
        if (auto t = options::Telemetry::from_tlv(*o)) {
            auto ts = shifted_stamp(now, stamp_offset_ns(node, options::StampBoundary::Ingress));
            auto res = options::telemetry_stamp(*t, node.domain, ts,
                                                options::StampBoundary::Ingress);
            if (res == options::StampResult::Overflow)
                rec.note += "telemetry-overflow;";
            options::replace_option(*opts, t->to_tlv());
        }
    }

    if (const auto* o = options::find_option(*opts, wire::kOptDeadline)) {
        if (auto d = options::Deadline::from_tlv(*o)) {
            // Feasibility bound for the packet's true destination at this DBR.
            std::optional<uint32_t> bound;
            uint8_t best_len = 0;
            for (const auto& rule : scenario_.feasibility) {
                if (rule.node != node.id || !rule.prefix.contains(*od))
                    continue;
                if (!bound || rule.prefix.length >= best_len) {
                    bound = rule.min_residual_us;
                    best_len = rule.prefix.length;
                }
            }
            if (bound && !options::deadline_feasible(*d, *bound)) {
                rec.action = trace::Action::Drop;
                rec.drop_reason = drop_reason_name(DropReason::DeadlineInfeasible);
                rec.destination_after = f.pkt.base.destination;
                if (const auto* rh = f.pkt.dlsr())
                    rec.domains_left_after = rh->domains_left;
                rec.deadline = *d;
                log_.records.push_back(rec);
                dropped = true;
            }
        }
    }
}

void Simulation::egress_duties(const NodeIdentity& node, InFlight& f, uint64_t now,
                               trace::TraceRecord& rec) {
    std::vector<wire::TlvOption>* opts = nullptr;
    if (auto* rh = f.pkt.dlsr())
        opts = &rh->options;
    else if (auto* rh = f.pkt.dbd())
        opts = &rh->options;
    if (!opts || !f.meta.accounting_started)
        return;

    if (const auto* o = options::find_option(*opts, wire::kOptTelemetry)) {
        if (auto t = options::Telemetry::from_tlv(*o)) {
            auto ts = shifted_stamp(now, stamp_offset_ns(node, options::StampBoundary::Egress));
            auto res =
                options::telemetry_stamp(*t, node.domain, ts, options::StampBoundary::Egress);
            if (res == options::StampResult::MismatchedEgress)
                rec.note += "telemetry-mismatched-egress;";
            options::replace_option(*opts, t->to_tlv());
        }
    }
    if (const auto* o = options::find_option(*opts, wire::kOptDeadline)) {
        if (auto d = options::Deadline::from_tlv(*o)) {
            auto debited =
                options::deadline_debit(*d, residence_us(f.meta.domain_entry_ns, now));
            if (debited.overrun && !d->overrun)
                rec.note += "deadline-overrun;";
            options::replace_option(*opts, debited.to_tlv());
        }
    }
}

void Simulation::decap_duties(const NodeIdentity& node, InFlight& f, uint64_t now,
                              trace::TraceRecord& rec) {
    std::vector<wire::TlvOption>* opts = nullptr;
    if (auto* rh = f.pkt.dlsr())
        opts = &rh->options;
    else if (auto* rh = f.pkt.dbd())
        opts = &rh->options;
    if (!opts)
        return;

    // The destination host is the decapsulation point: it closes the last
    // domain's telemetry record and debits its residence.
    if (const auto* o = options::find_option(*opts, wire::kOptTelemetry)) {
        if (auto t = options::Telemetry::from_tlv(*o)) {
            if (f.meta.accounting_started) {
                auto ts =
                    shifted_stamp(now, stamp_offset_ns(node, options::StampBoundary::Egress));
                auto res = options::telemetry_stamp(*t, f.meta.current_domain, ts,
                                                    options::StampBoundary::Egress);
                if (res == options::StampResult::MismatchedEgress)
                    rec.note += "telemetry-mismatched-egress;";
                options::replace_option(*opts, t->to_tlv());
            }
            rec.telemetry = options::Telemetry::from_tlv(
                *options::find_option(*opts, wire::kOptTelemetry));
        }
    }
    if (const auto* o = options::find_option(*opts, wire::kOptDeadline)) {
        if (auto d = options::Deadline::from_tlv(*o)) {
            options::Deadline final_state = *d;
            if (f.meta.accounting_started) {
                final_state =
                    options::deadline_debit(*d, residence_us(f.meta.domain_entry_ns, now));
                options::replace_option(*opts, final_state.to_tlv());
            }
            rec.deadline = final_state;
        }
    }
}

void Simulation::process_at_node(const NodeIdentity& node, InFlight& f, uint64_t now) {
    trace::TraceRecord rec = make_record(node, f, now);

    bool crossing = f.meta.current_domain != node.domain;
    if (crossing || (node.kind == NodeKind::Border && !f.meta.accounting_started)) {
        bool dropped = false;
        ingress_duties(node, f, now, crossing, rec, dropped);
        if (dropped)
            return;
    }

    const Fib& fib = converged_.fibs.at(node.id);
    ForwardingAction action;
    if (node.kind == NodeKind::Border && f.pkt.dlsr()) {
        action = dlsr_process(node, converged_.dets.at(node.id), fib, f.pkt);
    } else if (node.kind == NodeKind::Border && f.pkt.dbd()) {
        action = dbd_process(node, converged_.dets.at(node.id), fib, f.pkt);
    } else {
        // Interior and host nodes must leave the routing header untouched.
        wire::RoutingHeader before = f.pkt.rh;
        action = interior_forward(node, fib, f.pkt);
        if (node.kind != NodeKind::Border && !(f.pkt.rh == before))
            throw std::logic_error("routing header modified outside a border node");
    }

    rec.destination_after = f.pkt.base.destination;
    if (const auto* rh = f.pkt.dlsr())
        rec.domains_left_after = rh->domains_left;

    if (const auto* drop = std::get_if<Drop>(&action)) {
        rec.action = trace::Action::Drop;
        rec.drop_reason = drop_reason_name(drop->reason);
        log_.records.push_back(rec);
        return;
    }
    if (std::holds_alternative<Deliver>(action)) {
        rec.action = trace::Action::Deliver;
        decap_duties(node, f, now, rec);
        log_.records.push_back(rec);
        return;
    }

    const auto& fwd = std::get<ForwardTo>(action);
    const NodeIdentity* next = scenario_.topology.owner_of(fwd.next_hop);
    if (!next)
        throw std::logic_error("next hop " + fwd.next_hop.str() + " owned by no node");
    size_t link_index = 0;
    const Link* link = find_link(node.id, next->id, &link_index);
    if (!link)
        throw std::logic_error("no link between " + node.id + " and " + next->id);

    if (next->domain != node.domain)
        egress_duties(node, f, now, rec);

    rec.action = trace::Action::Forward;
    rec.next_hop_node = next->id;
    log_.records.push_back(rec);

    Event e;
    e.at_node = next->id;
    e.packet = std::make_shared<InFlight>(std::move(f));
    schedule(std::move(e),
             now + proc_delay_ns(node) + link->latency_us * 1000ULL + link_jitter_ns(link_index));
}

trace::TraceLog Simulation::run(std::optional<uint64_t> until_ns) {
    if (ran_)
        throw std::logic_error("simulation already ran");
    ran_ = true;
    while (!queue_.empty()) {
        Event e = queue_.top();
        if (until_ns && e.time_ns > *until_ns)
            break;
        queue_.pop();
        if (e.flow_index >= 0) {
            inject(scenario_.flows[e.flow_index], e.seq, e.time_ns);
        } else {
            const NodeIdentity& node = scenario_.topology.node(e.at_node);
            process_at_node(node, *e.packet, e.time_ns);
        }
    }
    return log_;
}

uint64_t end_to_end_delay_ns(const trace::TraceLog& log, const std::string& flow,
                             uint32_t seq) {
    const trace::TraceRecord* inj = log.find_injection(flow, seq);
    const trace::TraceRecord* term = log.find_terminal(flow, seq);
    if (!inj || !term || term->action != trace::Action::Deliver)
        throw NotDelivered("packet " + flow + "#" + std::to_string(seq) + " was not delivered");
    return term->time_ns - inj->time_ns;
}

std::vector<std::string> check_expectations(const Scenario& scenario,
                                            const trace::TraceLog& log) {
    std::vector<std::string> failures;
    for (const auto& f : scenario.flows) {
        for (uint32_t k = 0; k < f.count; ++k) {
            std::string tag = "flow " + f.id + "#" + std::to_string(k);
            const trace::TraceRecord* term = log.find_terminal(f.id, k);
            if (!f.expect.outcome.empty()) {
                if (!term) {
                    failures.push_back(tag + ": no terminal record");
                    continue;
                }
                bool delivered = term->action == trace::Action::Deliver;
                if (f.expect.outcome == "delivered" && !delivered)
                    failures.push_back(tag + ": expected delivered, got dropped(" +
                                       term->drop_reason + ")");
                if (f.expect.outcome == "dropped" && delivered)
                    failures.push_back(tag + ": expected dropped, got delivered");
                if (f.expect.outcome == "dropped" && !delivered &&
                    !f.expect.drop_reason.empty() && term->drop_reason != f.expect.drop_reason)
                    failures.push_back(tag + ": expected drop reason " + f.expect.drop_reason +
                                       ", got " + term->drop_reason);
            }
            if (!f.expect.domain_sequence.empty()) {
                auto seq_domains = log.domain_sequence(f.id, k);
                if (seq_domains != f.expect.domain_sequence) {
                    std::string got, want;
                    for (DomainId d : seq_domains)
                        got += std::to_string(d) + " ";
                    for (DomainId d : f.expect.domain_sequence)
                        want += std::to_string(d) + " ";
                    failures.push_back(tag + ": domain sequence [ " + got + "] != expected [ " +
                                       want + "]");
                }
            }
        }
    }
    return failures;
}

} // namespace dlr::sim
