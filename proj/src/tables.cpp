#include "dlr/tables.hpp"

namespace dlr {

std::string Fib::dump() const {
    std::string out;
    for (const auto& [prefix, e] : routes_) {
        out += prefix.str();
        out += " via ";
        out += e.is_local() ? "local" : e.next_hop.str();
        out += " nd=";
        out += e.next_domain ? std::to_string(*e.next_domain) : "-";
        out += " path=";
        if (e.as_path.empty()) {
            out += "-";
        } else {
            for (size_t i = 0; i < e.as_path.size(); ++i) {
                if (i)
                    out += ",";
                out += std::to_string(e.as_path[i]);
            }
        }
        out += "\n";
    }
    return out;
}

} // namespace dlr
