#include <doctest.h>

#include "dlr/tables.hpp"
#include "testgen.hpp"

using namespace dlr;

namespace {

RouteEntry route(const std::string& prefix, const std::string& nh,
                 std::optional<DomainId> nd = std::nullopt,
                 std::vector<DomainId> path = {}) {
    return RouteEntry{*Prefix::parse(prefix),
                      nh.empty() ? Ipv6Address{} : *Ipv6Address::parse(nh), nd,
                      std::move(path)};
}

} // namespace

TEST_CASE("det lookup") {
    DomainEntryTable det;
    det.insert_if_absent(64501, *Ipv6Address::parse("2001:db8:1::1"));

    auto hit = det.lookup(64501);
    REQUIRE(hit);
    CHECK(*hit == *Ipv6Address::parse("2001:db8:1::1"));

    CHECK(!det.lookup(99)); // absent key
    CHECK(!DomainEntryTable{}.lookup(64501));

    // first entry wins
    CHECK(!det.insert_if_absent(64501, *Ipv6Address::parse("2001:db8:1::2")));
    CHECK(*det.lookup(64501) == *Ipv6Address::parse("2001:db8:1::1"));
}

TEST_CASE("fib longest-prefix match") {
    Fib fib;
    fib.install(route("2001:db8:5::/48", "2001:db8::1", 64502, {64502, 64505}));
    CHECK(fib.lookup(*Ipv6Address::parse("2001:db8:5::9")) != nullptr);
    CHECK(fib.lookup(*Ipv6Address::parse("2001:db8:5::9"))->next_domain == 64502);

    SUBCASE("more specific wins") {
        fib.install(route("2001:db8::/32", "2001:db8::2"));
        auto* e = fib.lookup(*Ipv6Address::parse("2001:db8:5::9"));
        REQUIRE(e);
        CHECK(e->prefix.length == 48);
        // only /32 covers this one
        auto* other = fib.lookup(*Ipv6Address::parse("2001:db8:6::9"));
        REQUIRE(other);
        CHECK(other->prefix.length == 32);
    }
    SUBCASE("no match, no default") {
        CHECK(fib.lookup(*Ipv6Address::parse("2001:dead::1")) == nullptr);
    }
    SUBCASE("default route catches everything") {
        fib.install(route("::/0", "2001:db8::f"));
        auto* e = fib.lookup(*Ipv6Address::parse("2001:dead::1"));
        REQUIRE(e);
        CHECK(e->prefix.length == 0);
    }
}

TEST_CASE("fib install replaces per exact prefix") {
    Fib fib;
    fib.install(route("2001:db8:5::/48", "2001:db8::1"));
    fib.install(route("2001:db8:5::/48", "2001:db8::2"));
    CHECK(fib.size() == 1);
    CHECK(fib.lookup(*Ipv6Address::parse("2001:db8:5::9"))->next_hop ==
          *Ipv6Address::parse("2001:db8::2"));
}

TEST_CASE("lpm equals brute-force scan") {
    testgen::Rng rng(21);
    for (int round = 0; round < 50; ++round) {
        Fib fib;
        std::vector<RouteEntry> entries;
        size_t n = rng.range(1, 30);
        for (size_t i = 0; i < n; ++i) {
            Prefix p;
            p.addr = testgen::random_address(rng);
            p.length = static_cast<uint8_t>(rng.below(129));
            // zero host bits so distinct entries differ as prefixes
            for (int bit = p.length; bit < 128; ++bit)
                p.addr.bytes[bit / 8] &= static_cast<uint8_t>(~(0x80 >> (bit % 8)));
            RouteEntry e{p, testgen::random_address(rng), std::nullopt, {}};
            fib.install(e);
            std::erase_if(entries, [&](const RouteEntry& x) { return x.prefix == p; });
            entries.push_back(e);
        }
        for (int probe = 0; probe < 40; ++probe) {
            Ipv6Address a = testgen::random_address(rng);
            if (probe % 3 == 0 && !entries.empty())
                a = entries[rng.below(entries.size())].prefix.addr;
            const RouteEntry* best = nullptr;
            for (const auto& e : entries)
                if (e.prefix.contains(a) && (!best || e.prefix.length > best->prefix.length))
                    best = &e;
            const RouteEntry* got = fib.lookup(a);
            if (!best) {
                CHECK(got == nullptr);
            } else {
                REQUIRE(got);
                CHECK(*got == *best);
            }
        }
    }
}

TEST_CASE("table dump format") {
    Fib fib;
    fib.install(route("2001:db8:5::/48", "2001:db8::1", 64502, {64502, 64505}));
    fib.install(route("2001:db8::/48", ""));
    CHECK(fib.dump() == "2001:db8::/48 via local nd=- path=-\n"
                        "2001:db8:5::/48 via 2001:db8::1 nd=64502 path=64502,64505\n");
}
