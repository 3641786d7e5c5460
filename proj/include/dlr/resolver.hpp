#ifndef DLR_RESOLVER_HPP
#define DLR_RESOLVER_HPP

#include <map>
#include <string>
#include <vector>

#include "dlr/addr.hpp"
#include "dlr/topology.hpp"
#include "dlr/wire.hpp"

// Name to domain-level-path resource records, the in-simulator stand-in
// for the name service that hands sources their DLSR paths. Records may
// carry a pre-built option list for QoS expression.

namespace dlr::resolver {

struct PathRecord {
    std::string name;
    std::vector<DomainId> domain_path; // forward order, last = destination's domain
    Ipv6Address destination;
    std::vector<wire::TlvOption> options;

    bool operator==(const PathRecord&) const = default;
};

struct InvalidPath : std::runtime_error {
    explicit InvalidPath(const std::string& what) : std::runtime_error(what) {}
};

class PathStore {
public:
    // Re-registration replaces. Throws InvalidPath when the path is empty,
    // names unknown domains, or does not end in the destination's domain.
    void register_record(const Topology& topo, PathRecord record);

    // nullptr = name not found.
    const PathRecord* query(const std::string& name) const;

    const std::map<std::string, PathRecord>& records() const { return records_; }

private:
    std::map<std::string, PathRecord> records_;
};

} // namespace dlr::resolver

#endif
