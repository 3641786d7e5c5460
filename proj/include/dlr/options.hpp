#ifndef DLR_OPTIONS_HPP
#define DLR_OPTIONS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "dlr/addr.hpp"
#include "dlr/wire.hpp"

// Typed views of the three functional TLV options and their per-DBR
// semantics. Value layouts are big-endian, fields in declaration order
// (see docs/wire-format.md).

namespace dlr::options {

// Deadline budget carried with the packet; budget_remaining + accumulated
// stays equal to the original budget except under saturation, which sets
// the overrun flag.
struct Deadline {
    uint32_t budget_remaining_us = 0;
    uint32_t accumulated_us = 0;
    bool overrun = false;
    uint32_t overrun_us = 0; // amount lost to saturation, not on the wire

    wire::TlvOption to_tlv() const;
    static std::optional<Deadline> from_tlv(const wire::TlvOption& o);

    bool operator==(const Deadline&) const = default;
};

// Feasibility gate run at domain ingress: a budget at or above the
// configured lower bound still passes.
bool deadline_feasible(const Deadline& d, uint32_t min_residual_us);

// Residence debit run at domain egress; saturates at zero.
Deadline deadline_debit(Deadline d, uint32_t residence_us);

struct TelemetryRecord {
    DomainId domain = 0;
    uint64_t ingress_ns = 0;
    uint64_t egress_ns = 0; // 0 = unset

    bool operator==(const TelemetryRecord&) const = default;
};

// Pre-allocated trace option: capacity fixed at encapsulation, 20 bytes
// per record slot.
struct Telemetry {
    uint8_t capacity = 0;
    bool overflow = false;
    std::vector<TelemetryRecord> records; // first next_free slots, visit order

    uint8_t next_free() const { return static_cast<uint8_t>(records.size()); }
    size_t value_size() const { return 4 + 20 * static_cast<size_t>(capacity); }

    wire::TlvOption to_tlv() const;
    static std::optional<Telemetry> from_tlv(const wire::TlvOption& o);

    bool operator==(const Telemetry&) const = default;
};

enum class StampBoundary { Ingress, Egress };

enum class StampResult { Ok, Overflow, MismatchedEgress };

// Ingress appends a record, egress completes the latest one. Overflow
// stops stamping but never drops the packet; a mismatched egress stamp is
// reported for the trace, not acted on.
StampResult telemetry_stamp(Telemetry& t, DomainId domain, uint64_t ts_ns,
                            StampBoundary boundary);

struct ServiceChain {
    uint32_t chain_id = 0;
    uint8_t service_index = 0; // remaining functions
    bool complete = false;

    wire::TlvOption to_tlv() const;
    static std::optional<ServiceChain> from_tlv(const wire::TlvOption& o);

    bool operator==(const ServiceChain&) const = default;
};

// Decrements the remaining-function counter when this domain hosts the
// next function; sets the chain-complete flag at the floor.
ServiceChain service_chain_step(ServiceChain s, bool hosts_function);

// TLV list helpers used by forwarding and the simulator.
const wire::TlvOption* find_option(const std::vector<wire::TlvOption>& options, uint8_t type);
void replace_option(std::vector<wire::TlvOption>& options, const wire::TlvOption& o);

} // namespace dlr::options

#endif
