#include <doctest.h>

#include <sstream>

#include "dlr/control.hpp"
#include "testgen.hpp"

using namespace dlr;
using namespace dlr::control;

namespace {

Ipv6Address addr(const std::string& s) { return *Ipv6Address::parse(s); }
Prefix prefix(const std::string& s) { return *Prefix::parse(s); }

// Three-domain chain AS1 -- AS2 -- AS5 with one DBR each.
Topology chain_topology() {
    Topology t;
    t.domains = {Domain{64501, "", {prefix("2001:db8:1::/48")}},
                 Domain{64502, "", {prefix("2001:db8:2::/48")}},
                 Domain{64505, "", {prefix("2001:db8:5::/48")}}};
    t.nodes = {
        NodeIdentity{"b1", NodeKind::Border, 64501, {addr("2001:db8:1::1")}},
        NodeIdentity{"d", NodeKind::Border, 64502, {addr("2001:db8:2::1")}},
        NodeIdentity{"y", NodeKind::Border, 64505, {addr("2001:db8:5::1")}},
        NodeIdentity{"h5", NodeKind::Host, 64505, {addr("2001:db8:5::9")}},
    };
    t.links = {Link{"b1", "d", 100, 0}, Link{"d", "y", 100, 0}, Link{"y", "h5", 100, 0}};
    t.validate();
    return t;
}

} // namespace

TEST_CASE("originate") {
    Topology t = chain_topology();
    const NodeIdentity& y = t.node("y");
    RouteUpdate u = originate(y, t.domain(64505), prefix("2001:db8:5::/48"));
    CHECK(u.as_path == std::vector<DomainId>{64505});
    CHECK(u.advertiser_address == addr("2001:db8:5::1"));

    // foreign prefix rejected
    CHECK_THROWS_AS(originate(y, t.domain(64505), prefix("2001:db8:2::/48")), ValidationError);

    // two prefixes give two independent updates
    Topology t2 = chain_topology();
    t2.domains[2].prefixes.push_back(prefix("2001:db8:55::/48"));
    t2.validate();
    RouteUpdate u2 = originate(t2.node("y"), t2.domain(64505), prefix("2001:db8:55::/48"));
    CHECK(u2.prefix == prefix("2001:db8:55::/48"));
    CHECK(u2.as_path == u.as_path);
}

TEST_CASE("process_update adopts, installs det, propagates with prepend") {
    // AS2's DBR d, peering with y (AS5) and b1 (AS1).
    DbrState d;
    d.node = "d";
    d.domain = 64502;
    PeeringSession from_y{"d", "y", 64505, addr("2001:db8:5::1"), addr("2001:db8:2::1"), false};
    PeeringSession to_b1{"d", "b1", 64501, addr("2001:db8:1::1"), addr("2001:db8:2::1"), false};
    d.sessions = {to_b1, from_y};

    RouteUpdate u{prefix("2001:db8:5::/48"), {64505}, addr("2001:db8:5::1")};
    auto propagations = process_update(d, d.sessions[1], u);

    REQUIRE(d.rib.count(u.prefix));
    CHECK(d.rib[u.prefix].as_path == std::vector<DomainId>{64505});
    CHECK(d.rib[u.prefix].source == RouteSource::External);
    CHECK(*d.det.lookup(64505) == addr("2001:db8:5::1"));

    REQUIRE(propagations.size() == 1);
    CHECK(propagations[0].first->remote_dbr == "b1");
    CHECK(propagations[0].second.as_path == std::vector<DomainId>{64502, 64505});
    CHECK(propagations[0].second.advertiser_address == addr("2001:db8:2::1"));

    SUBCASE("loop prevention") {
        RouteUpdate looped{prefix("2001:db8:9::/48"), {64505, 64502, 64501},
                           addr("2001:db8:5::1")};
        CHECK(process_update(d, d.sessions[1], looped).empty());
        CHECK(!d.rib.count(looped.prefix));
    }
    SUBCASE("shorter path replaces, longer is ignored") {
        RouteUpdate longer{u.prefix, {64501, 64509, 64505}, addr("2001:db8:1::1")};
        CHECK(process_update(d, d.sessions[0], longer).empty());
        CHECK(d.rib[u.prefix].as_path == std::vector<DomainId>{64505});

        RouteUpdate equal_worse{u.prefix, {64509}, addr("2001:db8:1::1")};
        // 64509 > 64505 lexicographically, same length: keep incumbent
        CHECK(process_update(d, d.sessions[0], equal_worse).empty());
        CHECK(d.rib[u.prefix].as_path == std::vector<DomainId>{64505});
    }
}

TEST_CASE("converge on the three-domain chain") {
    Topology t = chain_topology();
    Converged c = converge(t);

    // AS1's DBR reaches AS5's prefix over the full chain.
    const RouteEntry* e = c.fibs.at("b1").lookup(addr("2001:db8:5::9"));
    REQUIRE(e);
    CHECK(e->as_path == std::vector<DomainId>{64502, 64505});
    CHECK(e->next_domain == 64502);
    CHECK(e->next_hop == addr("2001:db8:2::1"));

    // middle DBR holds routes both ways
    CHECK(c.fibs.at("d").lookup(addr("2001:db8:1::5")) != nullptr);
    CHECK(c.fibs.at("d").lookup(addr("2001:db8:5::9"))->as_path ==
          std::vector<DomainId>{64505});

    // the host of AS5 reaches its own DBR intra-domain
    const RouteEntry* intra = c.fibs.at("h5").lookup(addr("2001:db8:5::1"));
    REQUIRE(intra);
    CHECK(!intra->next_domain);

    // DET soundness: d's entries name actual peering interfaces
    CHECK(*c.dets.at("d").lookup(64505) == addr("2001:db8:5::1"));
    CHECK(*c.dets.at("d").lookup(64501) == addr("2001:db8:1::1"));
}

TEST_CASE("converge handles single-domain and partitioned topologies") {
    SUBCASE("single domain") {
        Topology t;
        t.domains = {Domain{64501, "", {prefix("2001:db8:1::/48")}}};
        t.nodes = {NodeIdentity{"h1", NodeKind::Host, 64501, {addr("2001:db8:1::1")}},
                   NodeIdentity{"h2", NodeKind::Host, 64501, {addr("2001:db8:1::2")}}};
        t.links = {Link{"h1", "h2", 50, 0}};
        t.validate();
        Converged c = converge(t);
        for (const auto& [node, fib] : c.fibs)
            for (const auto& [p, e] : fib.routes())
                CHECK(!e.next_domain);
        CHECK(c.fibs.at("h1").lookup(addr("2001:db8:1::2")) != nullptr);
    }
    SUBCASE("partitioned domains learn nothing about each other") {
        Topology t;
        t.domains = {Domain{64501, "", {prefix("2001:db8:1::/48")}},
                     Domain{64502, "", {prefix("2001:db8:2::/48")}}};
        t.nodes = {NodeIdentity{"b1", NodeKind::Border, 64501, {addr("2001:db8:1::1")}},
                   NodeIdentity{"b2", NodeKind::Border, 64502, {addr("2001:db8:2::1")}}};
        t.validate();
        Converged c = converge(t);
        CHECK(c.fibs.at("b1").lookup(addr("2001:db8:2::1")) == nullptr);
        CHECK(c.fibs.at("b2").lookup(addr("2001:db8:1::1")) == nullptr);
    }
}

TEST_CASE("converged path lengths equal brute-force BFS distance") {
    testgen::Rng rng(1234);
    for (int round = 0; round < 25; ++round) {
        Topology topo = testgen::random_topology(rng, 12, 3);
        Converged c = converge(topo);
        for (const auto& src : topo.domains) {
            auto dist = testgen::bfs_domain_distance(topo, src.id);
            auto hosts = topo.nodes_of_domain(src.id);
            const Fib& fib = c.fibs.at(hosts.front());
            for (const auto& dst : topo.domains) {
                if (dst.id == src.id)
                    continue;
                const RouteEntry* e = fib.lookup(dst.prefixes[0].addr);
                if (!dist.count(dst.id)) {
                    CHECK(e == nullptr);
                    continue;
                }
                REQUIRE(e);
                CHECK(e->as_path.size() == static_cast<size_t>(dist.at(dst.id)));
                // loop freedom
                std::set<DomainId> unique(e->as_path.begin(), e->as_path.end());
                CHECK(unique.size() == e->as_path.size());
                CHECK(e->next_domain == e->as_path.front());
            }
        }
        // DET soundness: every DET address is a peering interface of the
        // named domain.
        for (const auto& [node, det] : c.dets) {
            for (const auto& [domain, address] : det.entries) {
                const NodeIdentity* owner = topo.owner_of(address);
                REQUIRE(owner);
                CHECK(owner->domain == domain);
                CHECK(owner->kind == NodeKind::Border);
            }
        }
    }
}

TEST_CASE("converge is deterministic") {
    testgen::Rng rng(777);
    Topology topo = testgen::random_topology(rng, 10, 3);
    Converged a = converge(topo);
    Converged b = converge(topo);
    CHECK(a == b);

    std::ostringstream dump_a, dump_b;
    for (const auto& [node, fib] : a.fibs)
        dump_a << node << "\n" << fib.dump();
    for (const auto& [node, fib] : b.fibs)
        dump_b << node << "\n" << fib.dump();
    CHECK(dump_a.str() == dump_b.str());
}

TEST_CASE("non-convergence guard reports instead of hanging") {
    // A well-formed topology converges well under the bound; force the
    // bound low by an adversarial but legal setup: just check the bound
    // logic stays quiet on a normal mesh.
    testgen::Rng rng(5);
    Topology topo = testgen::random_topology(rng, 8, 2);
    CHECK_NOTHROW(converge(topo));
}
