#include "dlr/trace.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace dlr::trace {

using nlohmann::json;

const char* action_name(Action a) {
    switch (a) {
    case Action::Inject: return "inject";
    case Action::Forward: return "forward";
    case Action::Deliver: return "deliver";
    case Action::Drop: return "drop";
    }
    return "unknown";
}

namespace {

Action action_from_name(const std::string& s) {
    if (s == "inject")
        return Action::Inject;
    if (s == "forward")
        return Action::Forward;
    if (s == "deliver")
        return Action::Deliver;
    if (s == "drop")
        return Action::Drop;
    throw std::runtime_error("unknown trace action: " + s);
}

json telemetry_to_json(const options::Telemetry& t) {
    json recs = json::array();
    for (const auto& r : t.records)
        recs.push_back(json{{"domain", r.domain},
                            {"ingress_ns", r.ingress_ns},
                            {"egress_ns", r.egress_ns}});
    return json{{"capacity", t.capacity}, {"overflow", t.overflow}, {"records", recs}};
}

options::Telemetry telemetry_from_json(const json& j) {
    options::Telemetry t;
    t.capacity = j.at("capacity").get<uint8_t>();
    t.overflow = j.at("overflow").get<bool>();
    for (const auto& r : j.at("records"))
        t.records.push_back(options::TelemetryRecord{r.at("domain").get<DomainId>(),
                                                     r.at("ingress_ns").get<uint64_t>(),
                                                     r.at("egress_ns").get<uint64_t>()});
    return t;
}

} // namespace

std::string TraceRecord::to_json() const {
    json j;
    j["time_ns"] = time_ns;
    j["node"] = node;
    j["domain"] = domain;
    j["domain_label"] = domain_label;
    j["flow"] = flow;
    j["seq"] = seq;
    j["action"] = action_name(action);
    if (!drop_reason.empty())
        j["drop_reason"] = drop_reason;
    if (domains_left_before)
        j["dl_before"] = *domains_left_before;
    if (domains_left_after)
        j["dl_after"] = *domains_left_after;
    j["dest_before"] = destination_before.str();
    j["dest_after"] = destination_after.str();
    if (!next_hop_node.empty())
        j["next_hop"] = next_hop_node;
    if (!note.empty())
        j["note"] = note;
    if (telemetry)
        j["telemetry"] = telemetry_to_json(*telemetry);
    if (deadline)
        j["deadline"] = json{{"budget_remaining_us", deadline->budget_remaining_us},
                             {"accumulated_us", deadline->accumulated_us},
                             {"overrun", deadline->overrun}};
    return j.dump();
}

TraceRecord TraceRecord::from_json(const std::string& line) {
    json j = json::parse(line);
    TraceRecord r;
    r.time_ns = j.at("time_ns").get<uint64_t>();
    r.node = j.at("node").get<std::string>();
    r.domain = j.at("domain").get<DomainId>();
    r.domain_label = j.at("domain_label").get<std::string>();
    r.flow = j.at("flow").get<std::string>();
    r.seq = j.at("seq").get<uint32_t>();
    r.action = action_from_name(j.at("action").get<std::string>());
    if (j.contains("drop_reason"))
        r.drop_reason = j["drop_reason"].get<std::string>();
    if (j.contains("dl_before"))
        r.domains_left_before = j["dl_before"].get<uint8_t>();
    if (j.contains("dl_after"))
        r.domains_left_after = j["dl_after"].get<uint8_t>();
    auto parse_addr = [](const std::string& s) {
        auto a = Ipv6Address::parse(s);
        if (!a)
            throw std::runtime_error("bad address in trace: " + s);
        return *a;
    };
    r.destination_before = parse_addr(j.at("dest_before").get<std::string>());
    r.destination_after = parse_addr(j.at("dest_after").get<std::string>());
    if (j.contains("next_hop"))
        r.next_hop_node = j["next_hop"].get<std::string>();
    if (j.contains("note"))
        r.note = j["note"].get<std::string>();
    if (j.contains("telemetry"))
        r.telemetry = telemetry_from_json(j["telemetry"]);
    if (j.contains("deadline")) {
        options::Deadline d;
        d.budget_remaining_us = j["deadline"].at("budget_remaining_us").get<uint32_t>();
        d.accumulated_us = j["deadline"].at("accumulated_us").get<uint32_t>();
        d.overrun = j["deadline"].at("overrun").get<bool>();
        r.deadline = d;
    }
    return r;
}

void TraceLog::write(std::ostream& os) const {
    os << "{\"schema\":\"" << kSchema << "\"}\n";
    for (const auto& r : records)
        os << r.to_json() << "\n";
}

TraceLog TraceLog::read(std::istream& is) {
    TraceLog log;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        if (first) {
            first = false;
            json j = json::parse(line);
            if (j.value("schema", "") != kSchema)
                throw std::runtime_error("unsupported trace schema");
            continue;
        }
        log.records.push_back(TraceRecord::from_json(line));
    }
    return log;
}

const TraceRecord* TraceLog::find_terminal(const std::string& flow, uint32_t seq) const {
    for (const auto& r : records)
        if (r.flow == flow && r.seq == seq &&
            (r.action == Action::Deliver || r.action == Action::Drop))
            return &r;
    return nullptr;
}

const TraceRecord* TraceLog::find_injection(const std::string& flow, uint32_t seq) const {
    for (const auto& r : records)
        if (r.flow == flow && r.seq == seq && r.action == Action::Inject)
            return &r;
    return nullptr;
}

std::vector<DomainId> TraceLog::domain_sequence(const std::string& flow, uint32_t seq) const {
    std::vector<DomainId> out;
    for (const auto& r : records) {
        if (r.flow != flow || r.seq != seq)
            continue;
        if (out.empty() || out.back() != r.domain)
            out.push_back(r.domain);
    }
    return out;
}

} // namespace dlr::trace
