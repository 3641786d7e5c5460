#ifndef DLR_SCENARIO_HPP
#define DLR_SCENARIO_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dlr/control.hpp"
#include "dlr/resolver.hpp"
#include "dlr/topology.hpp"
#include "dlr/wire.hpp"

namespace dlr {

enum class FlowMode { Dlsr, Dbd, Plain };

const char* flow_mode_name(FlowMode m);

struct FlowOptionsSpec {
    std::optional<uint32_t> deadline_us;
    std::optional<uint8_t> telemetry_capacity;
    std::optional<std::pair<uint32_t, uint8_t>> service_chain; // chain id, index
    std::vector<wire::TlvOption> raw;
};

struct FlowExpectation {
    std::string outcome; // "", "delivered", "dropped"
    std::string drop_reason;
    std::vector<DomainId> domain_sequence; // empty = unchecked
};

struct FlowSpec {
    std::string id;
    std::string src_node;
    std::optional<Ipv6Address> dst; // or a resolver name:
    std::string dst_name;
    FlowMode mode = FlowMode::Plain;
    std::vector<DomainId> path; // explicit DLSR path (forward order)
    FlowOptionsSpec options;
    uint64_t start_us = 0;
    uint32_t count = 1;
    uint64_t interval_us = 0;
    uint16_t payload_bytes = 0;
    FlowExpectation expect;
};

// Per-node stamp clock offsets; nonzero values model tampered telemetry.
struct ClockOffset {
    int64_t ingress_ns = 0;
    int64_t egress_ns = 0;
};

struct FeasibilityRule {
    std::string node;
    Prefix prefix;
    uint32_t min_residual_us = 0;
};

struct Scenario {
    std::string name;
    uint64_t seed = 0;
    Topology topology;
    std::vector<control::Origination> originations; // empty = defaults
    std::vector<resolver::PathRecord> resolver_records;
    std::map<DomainId, uint64_t> sla_us;
    std::vector<FeasibilityRule> feasibility;
    std::set<DomainId> service_domains;
    std::map<std::string, ClockOffset> clock_offsets;
    std::map<std::string, uint32_t> proc_delay_us; // keyed by node kind name
    std::vector<FlowSpec> flows;

    // Structural checks beyond Topology::validate (flow/node references,
    // mode/path consistency). Called by the loaders.
    void validate();
};

Scenario load_scenario_json(const std::string& text);
Scenario load_scenario_file(const std::string& path);

} // namespace dlr

#endif
