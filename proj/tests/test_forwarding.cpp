#include <doctest.h>

#include "dlr/forwarding.hpp"
#include "testgen.hpp"

using namespace dlr;
using namespace dlr::wire;

namespace {

// Fig. 2 names: AS0=64500 (egress x), AS1=64501 (ingress a), AS2=64502
// (ingress d), AS5=64505 (ingress y, holds dst).
const DomainId kAs0 = 64500, kAs1 = 64501, kAs2 = 64502, kAs5 = 64505;

Ipv6Address addr(const std::string& s) { return *Ipv6Address::parse(s); }

NodeIdentity border(const std::string& id, DomainId domain, const std::string& address) {
    return NodeIdentity{id, NodeKind::Border, domain, {addr(address)}};
}

Packet fig2_packet() {
    Packet p;
    p.base.source = addr("2001:db8:0::10");
    p.base.destination = addr("2001:db8:5::9");
    p.base.next_header = 17;
    return encapsulate_dlsr(std::move(p), std::vector<DomainId>{kAs0, kAs1, kAs2, kAs5}, {});
}

RouteEntry host_route(const std::string& dst, const std::string& via) {
    return RouteEntry{Prefix{addr(dst), 128}, addr(via), std::nullopt, {}};
}

} // namespace

TEST_CASE("encapsulation reverses the path and indexes the last entry") {
    Packet p = fig2_packet();
    REQUIRE(p.dlsr());
    const DlsrHeader& rh = *p.dlsr();
    CHECK(rh.domain_list == std::vector<DomainId>{kAs5, kAs2, kAs1, kAs0});
    CHECK(rh.first_domain() == 3);
    CHECK(rh.domains_left == 3);
    CHECK(rh.original_destination == addr("2001:db8:5::9"));
    CHECK(rh.next_header == 17);
    CHECK(p.base.next_header == kProtoRoutingHeader);
    // base destination untouched: intra-domain routing carries the packet out
    CHECK(p.base.destination == addr("2001:db8:5::9"));

    SUBCASE("single-domain path still encapsulates") {
        Packet q;
        q.base.destination = addr("2001:db8:0::10");
        q = encapsulate_dlsr(std::move(q), std::vector<DomainId>{kAs0}, {});
        CHECK(q.dlsr()->domains_left == 0);
        CHECK(q.dlsr()->first_domain() == 0);
    }
    SUBCASE("empty path") {
        Packet q;
        CHECK_THROWS_AS(encapsulate_dlsr(std::move(q), std::vector<DomainId>{}, {}),
                        EmptyPathError);
    }
}

TEST_CASE("dlsr processing walks the Fig. 2 path") {
    // Egress x of the first domain: matches AS0 via the index fields.
    NodeIdentity x = border("x", kAs0, "2001:db8:0::1");
    DomainEntryTable det_x;
    det_x.insert_if_absent(kAs1, addr("2001:db8:1::1"));
    Fib fib_x;
    fib_x.install(host_route("2001:db8:1::1", "2001:db8:1::1"));

    Packet p = fig2_packet();
    ForwardingAction act = dlsr_process(x, det_x, fib_x, p);
    CHECK(act == ForwardingAction{ForwardTo{addr("2001:db8:1::1")}});
    CHECK(p.dlsr()->domains_left == 2);
    CHECK(p.base.destination == addr("2001:db8:1::1"));

    // Ingress a of AS1: destination matches, rewrites toward AS2's DBR d.
    NodeIdentity a = border("a", kAs1, "2001:db8:1::1");
    DomainEntryTable det_a;
    det_a.insert_if_absent(kAs2, addr("2001:db8:2::1"));
    Fib fib_a;
    fib_a.install(host_route("2001:db8:2::1", "2001:db8:1::3"));
    act = dlsr_process(a, det_a, fib_a, p);
    CHECK(act == ForwardingAction{ForwardTo{addr("2001:db8:1::3")}});
    CHECK(p.dlsr()->domains_left == 1);
    CHECK(p.base.destination == addr("2001:db8:2::1"));

    // Egress b of AS1 en route: no trigger, plain forward.
    NodeIdentity b = border("b", kAs1, "2001:db8:1::3");
    Fib fib_b;
    fib_b.install(host_route("2001:db8:2::1", "2001:db8:2::1"));
    act = dlsr_process(b, DomainEntryTable{}, fib_b, p);
    CHECK(act == ForwardingAction{ForwardTo{addr("2001:db8:2::1")}});
    CHECK(p.dlsr()->domains_left == 1); // untouched

    // Ingress d of AS2 rewrites toward y.
    NodeIdentity d = border("d", kAs2, "2001:db8:2::1");
    DomainEntryTable det_d;
    det_d.insert_if_absent(kAs5, addr("2001:db8:5::1"));
    Fib fib_d;
    fib_d.install(host_route("2001:db8:5::1", "2001:db8:5::1"));
    act = dlsr_process(d, det_d, fib_d, p);
    CHECK(p.dlsr()->domains_left == 0);
    CHECK(p.base.destination == addr("2001:db8:5::1"));

    // Ingress y of the last domain restores the original destination.
    NodeIdentity y = border("y", kAs5, "2001:db8:5::1");
    Fib fib_y;
    fib_y.install(host_route("2001:db8:5::9", "2001:db8:5::9"));
    act = dlsr_process(y, DomainEntryTable{}, fib_y, p);
    CHECK(act == ForwardingAction{ForwardTo{addr("2001:db8:5::9")}});
    CHECK(p.base.destination == addr("2001:db8:5::9"));
    CHECK(p.dlsr()->domains_left == 0);
}

TEST_CASE("dlsr drops on a det miss") {
    NodeIdentity a = border("a", kAs1, "2001:db8:1::1");
    Packet p = fig2_packet();
    p.dlsr()->domains_left = 2;
    p.base.destination = addr("2001:db8:1::1");
    // DET missing AS2
    ForwardingAction act = dlsr_process(a, DomainEntryTable{}, Fib{}, p);
    CHECK(act == ForwardingAction{Drop{DropReason::NoRouteToNextDomain}});
}

TEST_CASE("dlsr malformed index drops") {
    NodeIdentity a = border("a", kAs1, "2001:db8:1::1");
    Packet p = fig2_packet();
    p.dlsr()->domains_left = 9;
    ForwardingAction act = dlsr_process(a, DomainEntryTable{}, Fib{}, p);
    CHECK(act == ForwardingAction{Drop{DropReason::Malformed}});
}

TEST_CASE("dbd processing") {
    Packet p;
    p.base.source = addr("2001:db8:0::10");
    p.base.destination = addr("2001:db8:5::9");
    p = encapsulate_dbd(std::move(p), {});

    // First-domain egress x: destination equals the original destination.
    NodeIdentity x = border("x", kAs0, "2001:db8:0::1");
    DomainEntryTable det_x;
    det_x.insert_if_absent(kAs1, addr("2001:db8:1::1"));
    Fib fib_x;
    fib_x.install(RouteEntry{*Prefix::parse("2001:db8:5::/48"), addr("2001:db8:1::1"), kAs1,
                             {kAs1, kAs2, kAs5}});
    fib_x.install(host_route("2001:db8:1::1", "2001:db8:1::1"));
    ForwardingAction act = dbd_process(x, det_x, fib_x, p);
    CHECK(act == ForwardingAction{ForwardTo{addr("2001:db8:1::1")}});
    CHECK(p.base.destination == addr("2001:db8:1::1"));

    // Ingress of the destination domain restores.
    NodeIdentity y = border("y", kAs5, "2001:db8:5::1");
    p.base.destination = addr("2001:db8:5::1");
    Fib fib_y;
    fib_y.install(RouteEntry{*Prefix::parse("2001:db8:5::/48"), Ipv6Address{}, std::nullopt, {}});
    fib_y.install(host_route("2001:db8:5::9", "2001:db8:5::9"));
    act = dbd_process(y, DomainEntryTable{}, fib_y, p);
    CHECK(act == ForwardingAction{ForwardTo{addr("2001:db8:5::9")}});
    CHECK(p.base.destination == addr("2001:db8:5::9"));

    SUBCASE("unroutable original destination") {
        Packet q;
        q.base.destination = addr("2001:db8:9::9");
        q = encapsulate_dbd(std::move(q), {});
        act = dbd_process(x, det_x, Fib{}, q);
        CHECK(act == ForwardingAction{Drop{DropReason::NoRoute}});
    }
    SUBCASE("det miss on the next domain") {
        Packet q;
        q.base.destination = addr("2001:db8:5::9");
        q = encapsulate_dbd(std::move(q), {});
        act = dbd_process(x, DomainEntryTable{}, fib_x, q);
        CHECK(act == ForwardingAction{Drop{DropReason::NoRouteToNextDomain}});
    }
    SUBCASE("uninvolved border forwards without touching the header") {
        Packet q;
        q.base.destination = addr("2001:db8:5::9");
        q = encapsulate_dbd(std::move(q), {});
        q.base.destination = addr("2001:db8:2::1"); // rewritten upstream
        NodeIdentity b = border("b", kAs1, "2001:db8:1::3");
        Fib fib_b;
        fib_b.install(host_route("2001:db8:2::1", "2001:db8:2::1"));
        DbdHeader before = *q.dbd();
        act = dbd_process(b, DomainEntryTable{}, fib_b, q);
        CHECK(act == ForwardingAction{ForwardTo{addr("2001:db8:2::1")}});
        CHECK(*q.dbd() == before);
    }
}

TEST_CASE("interior forwarding") {
    NodeIdentity r{"r1", NodeKind::Interior, kAs1, {addr("2001:db8:1::7")}};
    Fib fib;
    fib.install(host_route("2001:db8:2::1", "2001:db8:1::3"));

    Packet p;
    p.base.destination = addr("2001:db8:2::1");
    p.base.hop_limit = 64;
    ForwardingAction act = interior_forward(r, fib, p);
    CHECK(act == ForwardingAction{ForwardTo{addr("2001:db8:1::3")}});
    CHECK(p.base.hop_limit == 63);

    SUBCASE("expired hop limit") {
        p.base.hop_limit = 1;
        act = interior_forward(r, fib, p);
        CHECK(act == ForwardingAction{Drop{DropReason::HopLimitExceeded}});
        CHECK(p.base.hop_limit == 0);
    }
    SUBCASE("local delivery") {
        p.base.destination = addr("2001:db8:1::7");
        CHECK(interior_forward(r, fib, p) == ForwardingAction{Deliver{}});
    }
    SUBCASE("no route") {
        p.base.destination = addr("2001:dead::1");
        CHECK(interior_forward(r, fib, p) == ForwardingAction{Drop{DropReason::NoRoute}});
    }
    SUBCASE("locally owned prefix with no host route") {
        fib.install(RouteEntry{*Prefix::parse("2001:db8:1::/48"), Ipv6Address{}, std::nullopt, {}});
        p.base.destination = addr("2001:db8:1::99");
        CHECK(interior_forward(r, fib, p) == ForwardingAction{Drop{DropReason::NoRoute}});
    }
}
