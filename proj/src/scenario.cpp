#include "dlr/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace dlr {

using nlohmann::json;

const char* flow_mode_name(FlowMode m) {
    switch (m) {
    case FlowMode::Dlsr: return "dlsr";
    case FlowMode::Dbd: return "dbd";
    case FlowMode::Plain: return "plain";
    }
    return "unknown";
}

void Scenario::validate() {
    topology.validate();

    for (const auto& o : originations) {
        if (!topology.node_index.count(o.node))
            throw ValidationError("originations: unknown node " + o.node);
        if (topology.node(o.node).kind != NodeKind::Border)
            throw ValidationError("originations: " + o.node + " is not a border node");
    }
    for (const auto& [domain, limit] : sla_us) {
        if (!topology.has_domain(domain))
            throw ValidationError("sla_us: unknown domain " + std::to_string(domain));
        (void)limit;
    }
    for (DomainId d : service_domains)
        if (!topology.has_domain(d))
            throw ValidationError("service_domains: unknown domain " + std::to_string(d));
    for (const auto& f : feasibility)
        if (!topology.node_index.count(f.node))
            throw ValidationError("feasibility: unknown node " + f.node);
    for (const auto& [node, off] : clock_offsets) {
        if (!topology.node_index.count(node))
            throw ValidationError("clock_offsets: unknown node " + node);
        (void)off;
    }

    std::set<std::string> record_names;
    for (const auto& r : resolver_records)
        record_names.insert(r.name);

    std::set<std::string> flow_ids;
    for (size_t i = 0; i < flows.size(); ++i) {
        const FlowSpec& f = flows[i];
        std::string where = "flows[" + std::to_string(i) + "]";
        if (f.id.empty())
            throw ValidationError(where + ".id: empty");
        if (!flow_ids.insert(f.id).second)
            throw ValidationError(where + ".id: duplicate " + f.id);
        if (!topology.node_index.count(f.src_node))
            throw ValidationError(where + ".src: unknown node " + f.src_node);
        if (!f.dst && f.dst_name.empty())
            throw ValidationError(where + ": needs dst or name");
        if (!f.dst_name.empty() && !record_names.count(f.dst_name))
            throw ValidationError(where + ".name: no resolver record " + f.dst_name);
        if (f.mode == FlowMode::Dlsr && f.path.empty() && f.dst_name.empty())
            throw ValidationError(where + ": dlsr flow needs a path or a resolver name");
        for (DomainId d : f.path)
            if (!topology.has_domain(d))
                throw ValidationError(where + ".path: unknown domain " + std::to_string(d));
        if (f.count == 0)
            throw ValidationError(where + ".count: must be positive");
        if (!f.expect.outcome.empty() && f.expect.outcome != "delivered" &&
            f.expect.outcome != "dropped")
            throw ValidationError(where + ".expect.outcome: delivered or dropped");
    }
}

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ValidationError(where + ": " + what);
}

Ipv6Address parse_addr(const json& j, const std::string& where) {
    if (!j.is_string())
        fail(where, "expected an address string");
    auto a = Ipv6Address::parse(j.get<std::string>());
    if (!a)
        fail(where, "bad address " + j.get<std::string>());
    return *a;
}

Prefix parse_prefix(const json& j, const std::string& where) {
    if (!j.is_string())
        fail(where, "expected a prefix string");
    auto p = Prefix::parse(j.get<std::string>());
    if (!p)
        fail(where, "bad prefix " + j.get<std::string>());
    return *p;
}

// Domains are referenced by numeric id or by label.
DomainId parse_domain_ref(const json& j, const std::map<std::string, DomainId>& labels,
                          const std::string& where) {
    if (j.is_number_unsigned())
        return j.get<DomainId>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        auto it = labels.find(s);
        if (it != labels.end())
            return it->second;
        try {
            size_t pos = 0;
            unsigned long v = std::stoul(s, &pos);
            if (pos == s.size())
                return static_cast<DomainId>(v);
        } catch (...) {
        }
        fail(where, "unknown domain " + s);
    }
    fail(where, "expected a domain id or label");
}

NodeKind parse_kind(const std::string& s, const std::string& where) {
    if (s == "host")
        return NodeKind::Host;
    if (s == "interior")
        return NodeKind::Interior;
    if (s == "border")
        return NodeKind::Border;
    fail(where, "unknown node kind " + s);
}

} // namespace

Scenario load_scenario_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("scenario: not valid JSON: ") + e.what());
    }
    if (!j.is_object())
        fail("scenario", "top level must be an object");

    Scenario sc;
    sc.name = j.value("name", "");
    sc.seed = j.value("seed", 0ULL);

    std::map<std::string, DomainId> labels;
    for (size_t i = 0; i < j.value("domains", json::array()).size(); ++i) {
        const json& dj = j["domains"][i];
        std::string where = "domains[" + std::to_string(i) + "]";
        Domain d;
        if (!dj.contains("id") || !dj["id"].is_number_unsigned())
            fail(where, "id required");
        d.id = dj["id"].get<DomainId>();
        d.label = dj.value("label", "");
        for (const auto& pj : dj.value("prefixes", json::array()))
            d.prefixes.push_back(parse_prefix(pj, where + ".prefixes"));
        sc.topology.domains.push_back(d);
        labels[d.label.empty() ? "AS" + std::to_string(d.id) : d.label] = d.id;
    }

    for (size_t i = 0; i < j.value("nodes", json::array()).size(); ++i) {
        const json& nj = j["nodes"][i];
        std::string where = "nodes[" + std::to_string(i) + "]";
        NodeIdentity n;
        n.id = nj.value("id", "");
        n.kind = parse_kind(nj.value("kind", "host"), where + ".kind");
        if (!nj.contains("domain"))
            fail(where, "domain required");
        n.domain = parse_domain_ref(nj["domain"], labels, where + ".domain");
        for (const auto& aj : nj.value("addresses", json::array()))
            n.addresses.push_back(parse_addr(aj, where + ".addresses"));
        sc.topology.nodes.push_back(std::move(n));
    }

    for (size_t i = 0; i < j.value("links", json::array()).size(); ++i) {
        const json& lj = j["links"][i];
        std::string where = "links[" + std::to_string(i) + "]";
        Link l;
        l.a = lj.value("a", "");
        l.b = lj.value("b", "");
        if (!lj.contains("latency_us"))
            fail(where, "latency_us required");
        l.latency_us = lj["latency_us"].get<uint32_t>();
        l.jitter_us = lj.value("jitter_us", 0U);
        sc.topology.links.push_back(l);
    }

    for (const auto& oj : j.value("originations", json::array()))
        sc.originations.push_back(control::Origination{
            oj.value("node", ""), parse_prefix(oj.at("prefix"), "originations.prefix")});

    for (size_t i = 0; i < j.value("resolver", json::array()).size(); ++i) {
        const json& rj = j["resolver"][i];
        std::string where = "resolver[" + std::to_string(i) + "]";
        resolver::PathRecord r;
        r.name = rj.value("name", "");
        for (const auto& dj : rj.value("path", json::array()))
            r.domain_path.push_back(parse_domain_ref(dj, labels, where + ".path"));
        r.destination = parse_addr(rj.at("destination"), where + ".destination");
        sc.resolver_records.push_back(std::move(r));
    }

    for (const auto& [key, value] : j.value("sla_us", json::object()).items())
        sc.sla_us[parse_domain_ref(json(key), labels, "sla_us")] = value.get<uint64_t>();

    for (const auto& dj : j.value("service_domains", json::array()))
        sc.service_domains.insert(parse_domain_ref(dj, labels, "service_domains"));

    for (size_t i = 0; i < j.value("feasibility", json::array()).size(); ++i) {
        const json& fj = j["feasibility"][i];
        std::string where = "feasibility[" + std::to_string(i) + "]";
        sc.feasibility.push_back(FeasibilityRule{fj.value("node", ""),
                                                 parse_prefix(fj.at("prefix"), where + ".prefix"),
                                                 fj.at("min_residual_us").get<uint32_t>()});
    }

    for (const auto& [node, oj] : j.value("clock_offsets", json::object()).items())
        sc.clock_offsets[node] =
            ClockOffset{oj.value("ingress_ns", 0LL), oj.value("egress_ns", 0LL)};

    for (const auto& [kind, us] : j.value("proc_delay_us", json::object()).items())
        sc.proc_delay_us[kind] = us.get<uint32_t>();

    for (size_t i = 0; i < j.value("flows", json::array()).size(); ++i) {
        const json& fj = j["flows"][i];
        std::string where = "flows[" + std::to_string(i) + "]";
        FlowSpec f;
        f.id = fj.value("id", "f" + std::to_string(i));
        f.src_node = fj.value("src", "");
        if (fj.contains("dst"))
            f.dst = parse_addr(fj["dst"], where + ".dst");
        f.dst_name = fj.value("name", "");
        std::string mode = fj.value("mode", "plain");
        if (mode == "dlsr")
            f.mode = FlowMode::Dlsr;
        else if (mode == "dbd")
            f.mode = FlowMode::Dbd;
        else if (mode == "plain")
            f.mode = FlowMode::Plain;
        else
            fail(where + ".mode", "dlsr, dbd or plain");
        for (const auto& dj : fj.value("path", json::array()))
            f.path.push_back(parse_domain_ref(dj, labels, where + ".path"));
        if (fj.contains("options")) {
            const json& oj = fj["options"];
            if (oj.contains("deadline_us"))
                f.options.deadline_us = oj["deadline_us"].get<uint32_t>();
            if (oj.contains("telemetry_capacity"))
                f.options.telemetry_capacity = oj["telemetry_capacity"].get<uint8_t>();
            if (oj.contains("service_chain"))
                f.options.service_chain = {oj["service_chain"].at("id").get<uint32_t>(),
                                           oj["service_chain"].at("index").get<uint8_t>()};
        }
        f.start_us = fj.value("start_us", 0ULL);
        f.count = fj.value("count", 1U);
        f.interval_us = fj.value("interval_us", 0ULL);
        f.payload_bytes = fj.value("payload_bytes", 0);
        if (fj.contains("expect")) {
            const json& ej = fj["expect"];
            f.expect.outcome = ej.value("outcome", "");
            f.expect.drop_reason = ej.value("drop_reason", "");
            for (const auto& dj : ej.value("domain_sequence", json::array()))
                f.expect.domain_sequence.push_back(
                    parse_domain_ref(dj, labels, where + ".expect.domain_sequence"));
        }
        sc.flows.push_back(std::move(f));
    }

    sc.validate();
    return sc;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("scenario: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_scenario_json(ss.str());
}

} // namespace dlr
