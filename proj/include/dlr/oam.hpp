#ifndef DLR_OAM_HPP
#define DLR_OAM_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dlr/options.hpp"
#include "dlr/trace.hpp"

// Per-domain accountability analysis over the telemetry option of a
// delivered packet: residence/gap decomposition, SLA verdicts, timestamp
// cross-examination, and delay attribution.

namespace dlr::oam {

struct MalformedTrace : std::runtime_error {
    explicit MalformedTrace(const std::string& what) : std::runtime_error(what) {}
};

enum class Verdict { Compliant, Violated, Unverifiable };

const char* verdict_name(Verdict v);

struct DomainReport {
    DomainId domain = kNoDomain;
    uint64_t ingress_ns = 0;
    uint64_t egress_ns = 0;
    uint64_t residence_ns = 0;
    std::optional<uint64_t> gap_ns; // to the next domain's ingress; absent on the last
    std::optional<uint64_t> sla_ns;
    Verdict verdict = Verdict::Unverifiable;
};

struct Analysis {
    std::vector<DomainReport> reports; // visit order
    bool unverifiable_tail = false;    // telemetry overflowed before the last domain
};

// One report per completed record. Throws MalformedTrace on incomplete or
// unordered records; use cross_examine for traces suspected of tampering.
Analysis analyze(const options::Telemetry& telemetry,
                 const std::map<DomainId, uint64_t>& sla_ns);

enum class AnomalyKind {
    EgressBeforeIngress,    // a record claims to leave before it arrived
    EgressAfterNextIngress, // a record claims to leave after the next domain saw it
};

const char* anomaly_kind_name(AnomalyKind k);

struct Anomaly {
    AnomalyKind kind;
    DomainId domain; // the domain whose stamp is implicated
    size_t record_index;
};

std::vector<Anomaly> cross_examine(const options::Telemetry& telemetry);

struct Attribution {
    uint64_t total_residence_ns = 0;
    uint64_t total_gap_ns = 0;
    std::vector<DomainId> culprits;     // violated their SLA
    std::vector<DomainId> contributors; // compliant, under their SLA
    std::map<DomainId, uint64_t> excess_ns; // per culprit: residence - sla
    std::map<DomainId, uint64_t> credit_ns; // per contributor: sla - residence
    uint64_t budget_overrun_ns = 0; // measured span beyond the given budget
};

Attribution attribute(const std::vector<DomainReport>& reports, uint64_t total_budget_ns);

// Machine-parseable report for every delivered telemetry-bearing packet in
// the trace: one table row per domain plus anomaly lines.
std::string format_report(const trace::TraceLog& log,
                          const std::map<DomainId, uint64_t>& sla_ns,
                          const std::map<DomainId, std::string>& labels);

} // namespace dlr::oam

#endif
