#include "dlr/resolver.hpp"

#include <algorithm>

namespace dlr::resolver {

void PathStore::register_record(const Topology& topo, PathRecord record) {
    if (record.name.empty())
        throw InvalidPath("record name is empty");
    if (record.domain_path.empty())
        throw InvalidPath("record " + record.name + ": empty domain path");
    for (DomainId d : record.domain_path)
        if (!topo.has_domain(d))
            throw InvalidPath("record " + record.name + ": unknown domain " + std::to_string(d));
    const Domain& last = topo.domain(record.domain_path.back());
    bool covered = std::any_of(last.prefixes.begin(), last.prefixes.end(),
                               [&](const Prefix& p) { return p.contains(record.destination); });
    if (!covered)
        throw InvalidPath("record " + record.name + ": destination " +
                          record.destination.str() + " not in last domain " + last.label);
    records_[record.name] = std::move(record);
}

const PathRecord* PathStore::query(const std::string& name) const {
    auto it = records_.find(name);
    return it == records_.end() ? nullptr : &it->second;
}

} // namespace dlr::resolver
