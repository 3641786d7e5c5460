#include "dlr/oam.hpp"

#include <sstream>

namespace dlr::oam {

const char* verdict_name(Verdict v) {
    switch (v) {
    case Verdict::Compliant: return "compliant";
    case Verdict::Violated: return "violated";
    case Verdict::Unverifiable: return "unverifiable";
    }
    return "unknown";
}

const char* anomaly_kind_name(AnomalyKind k) {
    switch (k) {
    case AnomalyKind::EgressBeforeIngress: return "egress-before-ingress";
    case AnomalyKind::EgressAfterNextIngress: return "egress-after-next-ingress";
    }
    return "unknown";
}

Analysis analyze(const options::Telemetry& telemetry,
                 const std::map<DomainId, uint64_t>& sla_ns) {
    Analysis out;
    const auto& recs = telemetry.records;
    for (size_t i = 0; i < recs.size(); ++i) {
        const auto& r = recs[i];
        if (r.egress_ns == 0)
            throw MalformedTrace("record " + std::to_string(i) + " has no egress stamp");
        if (r.egress_ns < r.ingress_ns)
            throw MalformedTrace("record " + std::to_string(i) + " leaves before it arrives");
        if (i + 1 < recs.size() && recs[i + 1].ingress_ns < r.egress_ns)
            throw MalformedTrace("records " + std::to_string(i) + "," + std::to_string(i + 1) +
                                 " out of order");
        DomainReport rep;
        rep.domain = r.domain;
        rep.ingress_ns = r.ingress_ns;
        rep.egress_ns = r.egress_ns;
        rep.residence_ns = r.egress_ns - r.ingress_ns;
        if (i + 1 < recs.size())
            rep.gap_ns = recs[i + 1].ingress_ns - r.egress_ns;
        auto sla = sla_ns.find(r.domain);
        if (sla != sla_ns.end()) {
            rep.sla_ns = sla->second;
            rep.verdict = rep.residence_ns > sla->second ? Verdict::Violated
                                                         : Verdict::Compliant;
        } else {
            rep.verdict = Verdict::Unverifiable;
        }
        out.reports.push_back(rep);
    }
    out.unverifiable_tail = telemetry.overflow;
    return out;
}

std::vector<Anomaly> cross_examine(const options::Telemetry& telemetry) {
    std::vector<Anomaly> out;
    const auto& recs = telemetry.records;
    for (size_t i = 0; i < recs.size(); ++i) {
        if (recs[i].egress_ns != 0 && recs[i].egress_ns < recs[i].ingress_ns)
            out.push_back(Anomaly{AnomalyKind::EgressBeforeIngress, recs[i].domain, i});
        if (i + 1 < recs.size() && recs[i].egress_ns != 0 &&
            recs[i].egress_ns > recs[i + 1].ingress_ns)
            out.push_back(Anomaly{AnomalyKind::EgressAfterNextIngress, recs[i].domain, i});
    }
    return out;
}

Attribution attribute(const std::vector<DomainReport>& reports, uint64_t total_budget_ns) {
    Attribution out;
    for (const auto& r : reports) {
        out.total_residence_ns += r.residence_ns;
        if (r.gap_ns)
            out.total_gap_ns += *r.gap_ns;
        if (r.verdict == Verdict::Violated) {
            out.culprits.push_back(r.domain);
            out.excess_ns[r.domain] += r.residence_ns - *r.sla_ns;
        } else if (r.verdict == Verdict::Compliant) {
            out.contributors.push_back(r.domain);
            out.credit_ns[r.domain] += *r.sla_ns - r.residence_ns;
        }
    }
    uint64_t span = out.total_residence_ns + out.total_gap_ns;
    out.budget_overrun_ns = span > total_budget_ns ? span - total_budget_ns : 0;
    return out;
}

std::string format_report(const trace::TraceLog& log,
                          const std::map<DomainId, uint64_t>& sla_ns,
                          const std::map<DomainId, std::string>& labels) {
    std::ostringstream os;
    auto label = [&](DomainId d) {
        auto it = labels.find(d);
        return it == labels.end() ? "AS" + std::to_string(d) : it->second;
    };
    for (const auto& rec : log.records) {
        if (rec.action != trace::Action::Deliver || !rec.telemetry)
            continue;
        const trace::TraceRecord* inj = log.find_injection(rec.flow, rec.seq);
        os << "packet " << rec.flow << "#" << rec.seq << " delivered";
        if (inj) {
            os << " e2e_ns=" << rec.time_ns - inj->time_ns;
            if (!rec.telemetry->records.empty())
                os << " pre_stamp_ns=" << rec.telemetry->records.front().ingress_ns - inj->time_ns;
        }
        if (rec.deadline)
            os << " budget_remaining_us=" << rec.deadline->budget_remaining_us
               << " accumulated_us=" << rec.deadline->accumulated_us
               << (rec.deadline->overrun ? " overrun=1" : "");
        os << "\n";
        os << "domain ingress_ns egress_ns residence_ns gap_ns sla_ns verdict\n";
        try {
            Analysis a = analyze(*rec.telemetry, sla_ns);
            for (const auto& r : a.reports) {
                os << label(r.domain) << " " << r.ingress_ns << " " << r.egress_ns << " "
                   << r.residence_ns << " ";
                if (r.gap_ns)
                    os << *r.gap_ns;
                else
                    os << "-";
                os << " ";
                if (r.sla_ns)
                    os << *r.sla_ns;
                else
                    os << "-";
                os << " " << verdict_name(r.verdict) << "\n";
            }
            if (a.unverifiable_tail)
                os << "tail unverifiable (telemetry overflow)\n";
        } catch (const MalformedTrace& e) {
            os << "malformed-trace " << e.what() << "\n";
        }
        auto anomalies = cross_examine(*rec.telemetry);
        if (anomalies.empty()) {
            os << "anomalies: none\n";
        } else {
            for (const auto& a : anomalies)
                os << "anomaly " << anomaly_kind_name(a.kind) << " domain=" << label(a.domain)
                   << " record=" << a.record_index << "\n";
        }
    }
    return os.str();
}

} // namespace dlr::oam
