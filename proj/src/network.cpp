#include "mfg/network.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mfg/errors.hpp"

namespace mfg {

namespace {

constexpr std::array<Link, 2> kPath1{Link::e1, Link::e4};
constexpr std::array<Link, 2> kPath2{Link::e2, Link::e5};
constexpr std::array<Link, 3> kPath3{Link::e1, Link::e3, Link::e5};
constexpr std::size_t kNodeCount = 4;

}  // namespace

std::string_view link_name(Link e) noexcept {
    static constexpr std::array<std::string_view, kLinkCount> names{"e1", "e2", "e3", "e4", "e5"};
    return names[index(e)];
}

std::span<const Link> Network::path(std::size_t p) noexcept {
    switch (p) {
        case 0: return kPath1;
        case 1: return kPath2;
        default: return kPath3;
    }
}

double Network::path_length(std::size_t p) const noexcept {
    double total = 0.0;
    for (Link e : path(p)) total += length(e);
    return total;
}

double Network::penalty_length(Link e) const noexcept {
    const auto& l = lengths_;
    switch (e) {
        case Link::e1: return std::min(l[0] + l[3], l[0] + l[2] + l[4]);
        case Link::e2: return l[1] + l[4];
        case Link::e3: return l[2] + l[4];
        case Link::e4: return l[3];
        case Link::e5: return l[4];
    }
    return 0.0;
}

Network build_network(const LinkArray& lengths, const LinkArray& capacities) {
    for (Link e : kAllLinks) {
        const double l = lengths[index(e)];
        const double c = capacities[index(e)];
        if (!(l > 0.0) || !std::isfinite(l) || !(c > 0.0) || !std::isfinite(c)) {
            std::ostringstream msg;
            msg << "link " << link_name(e) << " has length " << l << " and capacity " << c
                << " (both must be positive)";
            throw Error(ErrorCode::NonPositiveGeometry, msg.str());
        }
    }
    if (!topology_is_valid()) {
        throw Error(ErrorCode::ValidationError, "network topology has an oriented cycle or unreachable node");
    }
    return Network(lengths, capacities);
}

bool topology_is_valid() noexcept {
    // Kahn's algorithm: every node must be removed for the graph to be acyclic.
    std::array<int, kNodeCount> indegree{};
    for (Node h : Network::kHead) ++indegree[static_cast<std::size_t>(h)];
    std::array<std::size_t, kNodeCount> queue{};
    std::size_t head = 0;
    std::size_t tail = 0;
    for (std::size_t v = 0; v < kNodeCount; ++v) {
        if (indegree[v] == 0) queue[tail++] = v;
    }
    while (head < tail) {
        const std::size_t v = queue[head++];
        for (std::size_t e = 0; e < kLinkCount; ++e) {
            if (static_cast<std::size_t>(Network::kTail[e]) != v) continue;
            if (--indegree[static_cast<std::size_t>(Network::kHead[e])] == 0) {
                queue[tail++] = static_cast<std::size_t>(Network::kHead[e]);
            }
        }
    }
    if (tail != kNodeCount) return false;

    auto reach = [](bool forward, Node start) {
        std::array<bool, kNodeCount> seen{};
        seen[static_cast<std::size_t>(start)] = true;
        for (std::size_t pass = 0; pass < kNodeCount; ++pass) {
            for (std::size_t e = 0; e < kLinkCount; ++e) {
                const auto from = static_cast<std::size_t>(forward ? Network::kTail[e] : Network::kHead[e]);
                const auto to = static_cast<std::size_t>(forward ? Network::kHead[e] : Network::kTail[e]);
                if (seen[from]) seen[to] = true;
            }
        }
        return std::all_of(seen.begin(), seen.end(), [](bool s) { return s; });
    };
    return reach(true, Node::origin) && reach(false, Node::destination);
}

LinkArray path_flow(const Network& /*network*/, const PathArray& z) {
    for (std::size_t p = 0; p < kPathCount; ++p) {
        if (z[p] < 0.0) {
            std::ostringstream msg;
            msg << "path preference z_p" << p + 1 << " = " << z[p] << " is negative";
            throw Error(ErrorCode::NegativePreference, msg.str());
        }
    }
    LinkArray y{};
    for (std::size_t e = 0; e < kLinkCount; ++e) {
        for (std::size_t p = 0; p < kPathCount; ++p) {
            if (Network::kIncidence[e][p] != 0) y[e] += z[p];
        }
    }
    return y;
}

double remaining_shortest_length(const Network& network, Link e) { return network.penalty_length(e); }

}  // namespace mfg
