#include <doctest.h>

#include "dlr/resolver.hpp"
#include "dlr/forwarding.hpp"
#include "testgen.hpp"

using namespace dlr;
using namespace dlr::resolver;

namespace {

Topology fig2ish_topology() {
    Topology t;
    auto px = [](const std::string& s) { return *Prefix::parse(s); };
    t.domains = {Domain{64500, "AS0", {px("2001:db8:0::/48")}},
                 Domain{64501, "AS1", {px("2001:db8:1::/48")}},
                 Domain{64502, "AS2", {px("2001:db8:2::/48")}},
                 Domain{64505, "AS5", {px("2001:db8:5::/48")}}};
    auto ad = [](const std::string& s) { return *Ipv6Address::parse(s); };
    t.nodes = {NodeIdentity{"src", NodeKind::Host, 64500, {ad("2001:db8:0::10")}},
               NodeIdentity{"dst", NodeKind::Host, 64505, {ad("2001:db8:5::9")}}};
    t.validate();
    return t;
}

} // namespace

TEST_CASE("register and query round-trip") {
    Topology topo = fig2ish_topology();
    PathStore store;
    PathRecord r;
    r.name = "render";
    r.domain_path = {64500, 64501, 64502, 64505};
    r.destination = *Ipv6Address::parse("2001:db8:5::9");
    store.register_record(topo, r);

    const PathRecord* got = store.query("render");
    REQUIRE(got);
    CHECK(*got == r);

    SUBCASE("unknown name") { CHECK(store.query("nope") == nullptr); }

    SUBCASE("re-registration replaces") {
        PathRecord r2 = r;
        r2.domain_path = {64500, 64505};
        store.register_record(topo, r2);
        CHECK(store.query("render")->domain_path == std::vector<DomainId>{64500, 64505});
    }

    SUBCASE("path ending outside the destination domain") {
        PathRecord bad = r;
        bad.domain_path = {64500, 64501};
        CHECK_THROWS_AS(store.register_record(topo, bad), InvalidPath);
    }
    SUBCASE("empty path") {
        PathRecord bad = r;
        bad.domain_path.clear();
        CHECK_THROWS_AS(store.register_record(topo, bad), InvalidPath);
    }
    SUBCASE("unknown domain in path") {
        PathRecord bad = r;
        bad.domain_path = {64500, 9999, 64505};
        CHECK_THROWS_AS(store.register_record(topo, bad), InvalidPath);
    }
}

TEST_CASE("stored record feeds encapsulation with valid header invariants") {
    Topology topo = fig2ish_topology();
    PathStore store;
    PathRecord r;
    r.name = "render";
    r.domain_path = {64500, 64501, 64502, 64505};
    r.destination = *Ipv6Address::parse("2001:db8:5::9");
    store.register_record(topo, r);

    const PathRecord* got = store.query("render");
    wire::Packet p;
    p.base.source = *Ipv6Address::parse("2001:db8:0::10");
    p.base.destination = got->destination;
    p = encapsulate_dlsr(std::move(p), got->domain_path, {});

    const wire::DlsrHeader& rh = *p.dlsr();
    CHECK(rh.domain_list == std::vector<DomainId>{64505, 64502, 64501, 64500});
    CHECK(rh.first_domain() == 3);
    CHECK(rh.domains_left == 3);
    // the encoded header passes the codec invariants end to end
    auto buf = wire::encode_dlsr(rh);
    CHECK(buf.size() == 40);
    CHECK(wire::decode_dlsr(buf) == rh);
}
