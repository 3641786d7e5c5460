#ifndef DLR_TRACE_HPP
#define DLR_TRACE_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dlr/addr.hpp"
#include "dlr/options.hpp"

namespace dlr::trace {

inline constexpr const char* kSchema = "dlr-trace/1";

enum class Action { Inject, Forward, Deliver, Drop };

const char* action_name(Action a);

// One record per processing step, serialized as one JSON object per line.
struct TraceRecord {
    uint64_t time_ns = 0;
    std::string node;
    DomainId domain = kNoDomain;
    std::string domain_label;
    std::string flow;
    uint32_t seq = 0;
    Action action = Action::Forward;
    std::string drop_reason; // set on Drop
    std::optional<uint8_t> domains_left_before, domains_left_after;
    Ipv6Address destination_before, destination_after;
    std::string next_hop_node; // set on Forward
    std::string note;          // anomalies: domain revisit, mismatched egress, ...
    // Delivery records embed the final option state for offline analysis.
    std::optional<options::Telemetry> telemetry;
    std::optional<options::Deadline> deadline;

    std::string to_json() const;
    static TraceRecord from_json(const std::string& line);

    bool operator==(const TraceRecord&) const = default;
};

struct TraceLog {
    std::vector<TraceRecord> records;

    void write(std::ostream& os) const; // schema line + one record per line
    static TraceLog read(std::istream& is);

    const TraceRecord* find_terminal(const std::string& flow, uint32_t seq) const;
    const TraceRecord* find_injection(const std::string& flow, uint32_t seq) const;
    // Distinct domains visited by one packet, in visit order.
    std::vector<DomainId> domain_sequence(const std::string& flow, uint32_t seq) const;

    bool operator==(const TraceLog&) const = default;
};

} // namespace dlr::trace

#endif
