#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>

namespace mfg {

inline constexpr std::size_t kLinkCount = 5;
inline constexpr std::size_t kPathCount = 3;

using LinkArray = std::array<double, kLinkCount>;
using PathArray = std::array<double, kPathCount>;

enum class Link : std::size_t { e1 = 0, e2, e3, e4, e5 };
enum class Node : std::size_t { origin = 0, v1, v2, destination };

inline constexpr std::array<Link, kLinkCount> kAllLinks{Link::e1, Link::e2, Link::e3, Link::e4, Link::e5};

[[nodiscard]] constexpr std::size_t index(Link e) noexcept { return static_cast<std::size_t>(e); }
[[nodiscard]] std::string_view link_name(Link e) noexcept;

/// Two-route network o -> {v1, v2} -> d with the cross link e3 = (v1, v2):
///
///   e1: o -> v1   e2: o -> v2   e3: v1 -> v2   e4: v1 -> d   e5: v2 -> d
///
/// Paths: p1 = (e1, e4), p2 = (e2, e5), p3 = (e1, e3, e5).
class Network {
public:
    static constexpr std::array<Node, kLinkCount> kTail{Node::origin, Node::origin, Node::v1, Node::v1, Node::v2};
    static constexpr std::array<Node, kLinkCount> kHead{Node::v1, Node::v2, Node::v2, Node::destination,
                                                        Node::destination};
    static constexpr std::array<std::array<int, kPathCount>, kLinkCount> kIncidence{{
        {1, 0, 1},
        {0, 1, 0},
        {0, 0, 1},
        {1, 0, 0},
        {0, 1, 1},
    }};

    [[nodiscard]] const LinkArray& lengths() const noexcept { return lengths_; }
    [[nodiscard]] const LinkArray& capacities() const noexcept { return capacities_; }
    [[nodiscard]] double length(Link e) const noexcept { return lengths_[index(e)]; }
    [[nodiscard]] double capacity(Link e) const noexcept { return capacities_[index(e)]; }

    /// Links of path p (0-based) in travel order.
    [[nodiscard]] static std::span<const Link> path(std::size_t p) noexcept;
    [[nodiscard]] double path_length(std::size_t p) const noexcept;

    /// Length charged by the terminal penalty when an agent is still at the tail of e at T.
    [[nodiscard]] double penalty_length(Link e) const noexcept;

private:
    friend Network build_network(const LinkArray& lengths, const LinkArray& capacities);
    Network(const LinkArray& lengths, const LinkArray& capacities) : lengths_(lengths), capacities_(capacities) {}

    LinkArray lengths_;
    LinkArray capacities_;
};

/// Throws NonPositiveGeometry on a non-positive length or capacity.
[[nodiscard]] Network build_network(const LinkArray& lengths, const LinkArray& capacities);

/// Acyclicity and reachability of the fixed topology (o reaches every node, every node reaches d).
[[nodiscard]] bool topology_is_valid() noexcept;

/// y = A z. Throws NegativePreference on a negative component.
[[nodiscard]] LinkArray path_flow(const Network& network, const PathArray& z);

[[nodiscard]] double remaining_shortest_length(const Network& network, Link e);

}  // namespace mfg
