#ifndef DLR_SIM_HPP
#define DLR_SIM_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "dlr/control.hpp"
#include "dlr/resolver.hpp"
#include "dlr/scenario.hpp"
#include "dlr/trace.hpp"

namespace dlr::sim {

struct NotDelivered : std::runtime_error {
    explicit NotDelivered(const std::string& what) : std::runtime_error(what) {}
};

// Deterministic event engine: events are processed in (time, insertion)
// order, jitter comes from a per-link counter stream seeded by the
// scenario seed, and all node state is touched only from the event loop.
class Simulation {
public:
    // Validates the scenario, converges the control plane, loads resolver
    // records and seeds the injection events.
    static Simulation build(Scenario scenario);

    // Processes events up to `until_ns` (or exhaustion) and returns the
    // trace. Can be called once per built simulation.
    trace::TraceLog run(std::optional<uint64_t> until_ns = std::nullopt);

    const Scenario& scenario() const { return scenario_; }
    const control::Converged& converged() const { return converged_; }
    const resolver::PathStore& paths() const { return path_store_; }

private:
    Simulation() = default;

    struct PacketMeta {
        std::string flow;
        uint32_t seq = 0;
        uint64_t inject_ns = 0;
        DomainId current_domain = kNoDomain;
        uint64_t domain_entry_ns = 0;
        bool accounting_started = false;
        std::vector<DomainId> visited;
    };
    struct InFlight {
        wire::Packet pkt;
        PacketMeta meta;
    };
    struct Event {
        uint64_t time_ns = 0;
        uint64_t order = 0;
        int flow_index = -1; // >= 0: injection
        uint32_t seq = 0;
        std::string at_node; // arrival
        std::shared_ptr<InFlight> packet;
    };
    struct EventAfter {
        bool operator()(const Event& a, const Event& b) const {
            return std::tie(a.time_ns, a.order) > std::tie(b.time_ns, b.order);
        }
    };

    void schedule(Event e, uint64_t time_ns);
    void inject(const FlowSpec& flow, uint32_t seq, uint64_t now);
    void process_at_node(const NodeIdentity& node, InFlight& f, uint64_t now);
    void ingress_duties(const NodeIdentity& node, InFlight& f, uint64_t now, bool crossing,
                        trace::TraceRecord& rec, bool& dropped);
    void egress_duties(const NodeIdentity& node, InFlight& f, uint64_t now,
                       trace::TraceRecord& rec);
    void decap_duties(const NodeIdentity& node, InFlight& f, uint64_t now,
                      trace::TraceRecord& rec);
    trace::TraceRecord make_record(const NodeIdentity& node, const InFlight& f,
                                   uint64_t now) const;
    uint64_t proc_delay_ns(const NodeIdentity& node) const;
    uint64_t link_jitter_ns(size_t link_index);
    int64_t stamp_offset_ns(const NodeIdentity& node, options::StampBoundary b) const;
    const Link* find_link(const std::string& a, const std::string& b, size_t* index) const;

    Scenario scenario_;
    control::Converged converged_;
    resolver::PathStore path_store_;
    std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
    uint64_t next_order_ = 0;
    std::map<size_t, uint64_t> jitter_state_; // link index -> stream state
    trace::TraceLog log_;
    bool ran_ = false;
};

// Delivery time minus injection time; throws NotDelivered for packets that
// were dropped or never terminated.
uint64_t end_to_end_delay_ns(const trace::TraceLog& log, const std::string& flow, uint32_t seq);

// Compares the trace against each flow's declared expectations; returns
// one message per violated expectation (empty = all met).
std::vector<std::string> check_expectations(const Scenario& scenario,
                                            const trace::TraceLog& log);

} // namespace dlr::sim

#endif
