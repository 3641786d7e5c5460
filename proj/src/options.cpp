#include "dlr/options.hpp"

namespace dlr::options {

namespace {

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    out.push_back(static_cast<uint8_t>(v >> 24));
    out.push_back(static_cast<uint8_t>(v >> 16));
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v));
}

void put_u64(std::vector<uint8_t>& out, uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8)
        out.push_back(static_cast<uint8_t>(v >> shift));
}

uint32_t get_u32(const uint8_t* p) {
    return (static_cast<uint32_t>(p[0]) << 24) | (static_cast<uint32_t>(p[1]) << 16) |
           (static_cast<uint32_t>(p[2]) << 8) | p[3];
}

uint64_t get_u64(const uint8_t* p) {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
        v = (v << 8) | p[i];
    return v;
}

} // namespace

wire::TlvOption Deadline::to_tlv() const {
    wire::TlvOption o;
    o.type = wire::kOptDeadline;
    put_u32(o.value, budget_remaining_us);
    put_u32(o.value, accumulated_us);
    o.value.push_back(overrun ? 1 : 0);
    o.value.insert(o.value.end(), 3, 0);
    return o;
}

std::optional<Deadline> Deadline::from_tlv(const wire::TlvOption& o) {
    if (o.type != wire::kOptDeadline || o.value.size() != 12)
        return std::nullopt;
    Deadline d;
    d.budget_remaining_us = get_u32(o.value.data());
    d.accumulated_us = get_u32(o.value.data() + 4);
    d.overrun = (o.value[8] & 1) != 0;
    return d;
}

bool deadline_feasible(const Deadline& d, uint32_t min_residual_us) {
    return d.budget_remaining_us >= min_residual_us;
}

Deadline deadline_debit(Deadline d, uint32_t residence_us) {
    if (residence_us > d.budget_remaining_us) {
        d.overrun = true;
        d.overrun_us += residence_us - d.budget_remaining_us;
        d.accumulated_us += d.budget_remaining_us;
        d.budget_remaining_us = 0;
    } else {
        d.budget_remaining_us -= residence_us;
        d.accumulated_us += residence_us;
    }
    return d;
}

wire::TlvOption Telemetry::to_tlv() const {
    wire::TlvOption o;
    o.type = wire::kOptTelemetry;
    o.value.reserve(value_size());
    o.value.push_back(capacity);
    o.value.push_back(next_free());
    o.value.push_back(overflow ? 1 : 0);
    o.value.push_back(0);
    for (const auto& r : records) {
        put_u32(o.value, r.domain);
        put_u64(o.value, r.ingress_ns);
        put_u64(o.value, r.egress_ns);
    }
    // untouched pre-allocated slots
    o.value.insert(o.value.end(), 20 * (capacity - records.size()), 0);
    return o;
}

std::optional<Telemetry> Telemetry::from_tlv(const wire::TlvOption& o) {
    if (o.type != wire::kOptTelemetry || o.value.size() < 4)
        return std::nullopt;
    Telemetry t;
    t.capacity = o.value[0];
    uint8_t next_free = o.value[1];
    t.overflow = (o.value[2] & 1) != 0;
    if (next_free > t.capacity || o.value.size() != t.value_size())
        return std::nullopt;
    for (size_t i = 0; i < next_free; ++i) {
        const uint8_t* p = o.value.data() + 4 + 20 * i;
        t.records.push_back(TelemetryRecord{get_u32(p), get_u64(p + 4), get_u64(p + 12)});
    }
    return t;
}

StampResult telemetry_stamp(Telemetry& t, DomainId domain, uint64_t ts_ns,
                            StampBoundary boundary) {
    if (boundary == StampBoundary::Ingress) {
        if (t.next_free() >= t.capacity) {
            t.overflow = true;
            return StampResult::Overflow;
        }
        t.records.push_back(TelemetryRecord{domain, ts_ns, 0});
        return StampResult::Ok;
    }
    if (t.records.empty() || t.records.back().domain != domain ||
        t.records.back().egress_ns != 0)
        return StampResult::MismatchedEgress;
    t.records.back().egress_ns = ts_ns;
    return StampResult::Ok;
}

wire::TlvOption ServiceChain::to_tlv() const {
    wire::TlvOption o;
    o.type = wire::kOptServiceChain;
    put_u32(o.value, chain_id);
    o.value.push_back(service_index);
    o.value.push_back(complete ? 1 : 0);
    o.value.insert(o.value.end(), 2, 0);
    return o;
}

std::optional<ServiceChain> ServiceChain::from_tlv(const wire::TlvOption& o) {
    if (o.type != wire::kOptServiceChain || o.value.size() != 8)
        return std::nullopt;
    ServiceChain s;
    s.chain_id = get_u32(o.value.data());
    s.service_index = o.value[4];
    s.complete = (o.value[5] & 1) != 0;
    return s;
}

ServiceChain service_chain_step(ServiceChain s, bool hosts_function) {
    if (!hosts_function)
        return s;
    if (s.service_index == 0) {
        s.complete = true;
        return s;
    }
    if (--s.service_index == 0)
        s.complete = true;
    return s;
}

const wire::TlvOption* find_option(const std::vector<wire::TlvOption>& options, uint8_t type) {
    for (const auto& o : options)
        if (o.type == type)
            return &o;
    return nullptr;
}

void replace_option(std::vector<wire::TlvOption>& options, const wire::TlvOption& o) {
    for (auto& existing : options) {
        if (existing.type == o.type) {
            existing = o;
            return;
        }
    }
    options.push_back(o);
}

} // namespace dlr::options
