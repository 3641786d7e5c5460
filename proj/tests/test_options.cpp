#include <doctest.h>

#include "dlr/options.hpp"
#include "testgen.hpp"

using namespace dlr;
using namespace dlr::options;

TEST_CASE("deadline feasibility") {
    Deadline d{5000, 0};
    CHECK(deadline_feasible(d, 3000));
    CHECK(!deadline_feasible(Deadline{1000, 0}, 3000));
    // boundary: an exactly-sufficient budget is feasible
    CHECK(deadline_feasible(Deadline{3000, 0}, 3000));
}

TEST_CASE("deadline debit") {
    Deadline d{5000, 0};
    Deadline after = deadline_debit(d, 1200);
    CHECK(after.budget_remaining_us == 3800);
    CHECK(after.accumulated_us == 1200);
    CHECK(!after.overrun);

    // saturation records the overrun
    Deadline tight{100, 900};
    Deadline sat = deadline_debit(tight, 250);
    CHECK(sat.budget_remaining_us == 0);
    CHECK(sat.accumulated_us == 1000);
    CHECK(sat.overrun);
    CHECK(sat.overrun_us == 150);

    CHECK(deadline_debit(d, 0) == d);
}

TEST_CASE("deadline conservation across random debit chains") {
    testgen::Rng rng(11);
    for (int i = 0; i < 500; ++i) {
        uint32_t budget = static_cast<uint32_t>(rng.range(100, 100000));
        Deadline d{budget, 0};
        while (!d.overrun && d.budget_remaining_us > 0) {
            d = deadline_debit(d, static_cast<uint32_t>(rng.below(budget / 2 + 2)));
            if (!d.overrun)
                CHECK(d.budget_remaining_us + d.accumulated_us == budget);
            if (rng.chance(30))
                break;
        }
    }
}

TEST_CASE("deadline tlv round-trip") {
    Deadline d{1234567, 89, true};
    auto back = Deadline::from_tlv(d.to_tlv());
    REQUIRE(back);
    CHECK(back->budget_remaining_us == 1234567);
    CHECK(back->accumulated_us == 89);
    CHECK(back->overrun);
    CHECK(d.to_tlv().value.size() == 12);
    CHECK(!Deadline::from_tlv(wire::TlvOption{wire::kOptDeadline, {1, 2}}));
}

TEST_CASE("telemetry stamping") {
    Telemetry t{4, false, {}};
    CHECK(telemetry_stamp(t, 64501, 10, StampBoundary::Ingress) == StampResult::Ok);
    CHECK(t.records == std::vector<TelemetryRecord>{{64501, 10, 0}});
    CHECK(t.next_free() == 1);

    CHECK(telemetry_stamp(t, 64501, 25, StampBoundary::Egress) == StampResult::Ok);
    CHECK(t.records == std::vector<TelemetryRecord>{{64501, 10, 25}});

    SUBCASE("egress without an open record") {
        CHECK(telemetry_stamp(t, 64501, 30, StampBoundary::Egress) ==
              StampResult::MismatchedEgress);
        CHECK(telemetry_stamp(t, 64502, 30, StampBoundary::Egress) ==
              StampResult::MismatchedEgress);
    }
    SUBCASE("capacity exhaustion sets the overflow flag") {
        Telemetry small{2, false, {}};
        telemetry_stamp(small, 1001, 1, StampBoundary::Ingress);
        telemetry_stamp(small, 1001, 2, StampBoundary::Egress);
        telemetry_stamp(small, 1002, 3, StampBoundary::Ingress);
        telemetry_stamp(small, 1002, 4, StampBoundary::Egress);
        auto prev = small.records;
        CHECK(telemetry_stamp(small, 1003, 5, StampBoundary::Ingress) == StampResult::Overflow);
        CHECK(small.overflow);
        CHECK(small.records == prev);
    }
}

TEST_CASE("telemetry tlv layout and round-trip") {
    Telemetry t{3, false, {}};
    telemetry_stamp(t, 64501, 10, StampBoundary::Ingress);
    telemetry_stamp(t, 64501, 25, StampBoundary::Egress);
    auto tlv = t.to_tlv();
    CHECK(tlv.value.size() == 4 + 20 * 3); // pre-allocated, length fixed by capacity
    auto back = Telemetry::from_tlv(tlv);
    REQUIRE(back);
    CHECK(*back == t);

    CHECK(!Telemetry::from_tlv(wire::TlvOption{wire::kOptTelemetry, {}}));
    // next_free beyond capacity
    wire::TlvOption bogus{wire::kOptTelemetry, std::vector<uint8_t>(24, 0)};
    bogus.value[0] = 1;
    bogus.value[1] = 9;
    CHECK(!Telemetry::from_tlv(bogus));
}

TEST_CASE("service chain steps") {
    ServiceChain s{7, 3};
    ServiceChain stepped = service_chain_step(s, true);
    CHECK(stepped.service_index == 2);
    CHECK(!stepped.complete);

    ServiceChain floor{7, 0};
    ServiceChain done = service_chain_step(floor, true);
    CHECK(done.service_index == 0);
    CHECK(done.complete);

    CHECK(service_chain_step(s, false) == s);

    ServiceChain last{7, 1};
    CHECK(service_chain_step(last, true).complete);

    auto back = ServiceChain::from_tlv(s.to_tlv());
    REQUIRE(back);
    CHECK(*back == s);
}
