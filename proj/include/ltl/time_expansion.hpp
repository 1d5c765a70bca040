#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ltl/network.hpp"

namespace ltl {

using NodeIndex = std::size_t;
using ArcIndex = std::size_t;

struct TimedNode {
    HubId hub = 0;
    int t = 0;

    bool operator==(const TimedNode&) const = default;
};

enum class ArcKind { Hold, Move };

struct TimedArc {
    ArcKind kind = ArcKind::Hold;
    NodeIndex tail = 0;
    NodeIndex head = 0;
    HubId tail_hub = 0;
    HubId head_hub = 0;
    int tail_t = 0;
    int head_t = 0;
    /// Index into the physical network's arcs(); only meaningful for Move.
    std::size_t phys = 0;
    int transit = 1;
    double distance_miles = 0.0;

    bool is_move() const { return kind == ArcKind::Move; }
    bool operator==(const TimedArc&) const = default;
};

/**
 * @brief Time-expanded copy of a physical network over instances 0..T.
 *
 * Nodes are numbered hub-major in ascending hub id order, so node
 * `rank(hub) * (T + 1) + t` is (hub, t). Arcs are sorted by tail hub id,
 * tail instance, head hub id, with Hold before Move on equal keys.
 * Immutable after construction.
 */
class TimeExpandedGraph {
public:
    TimeExpandedGraph() = default;

    int horizon() const { return horizon_; }
    const PhysicalNetwork& network() const { return network_; }
    const std::vector<TimedNode>& nodes() const { return nodes_; }
    const std::vector<TimedArc>& arcs() const { return arcs_; }

    /// Index of (hub, t); throws ValidationError when the node does not exist.
    NodeIndex node_index(HubId hub, int t) const;
    NodeIndex node_index(const TimedNode& n) const { return node_index(n.hub, n.t); }

    std::span<const ArcIndex> out_arcs(NodeIndex i) const;
    std::span<const ArcIndex> in_arcs(NodeIndex i) const;
    std::vector<TimedArc> out_arcs(const TimedNode& n) const;
    std::vector<TimedArc> in_arcs(const TimedNode& n) const;

    std::size_t hold_count() const { return holds_; }
    std::size_t move_count() const { return arcs_.size() - holds_; }

    friend TimeExpandedGraph expand(const PhysicalNetwork& network, int horizon);

private:
    int horizon_ = 0;
    PhysicalNetwork network_;
    std::vector<HubId> hub_order_;  // hub ids ascending
    std::vector<std::size_t> hub_rank_by_index_;
    std::vector<TimedNode> nodes_;
    std::vector<TimedArc> arcs_;
    std::size_t holds_ = 0;
    std::vector<std::size_t> out_start_, in_start_;
    std::vector<ArcIndex> out_list_, in_list_;
};

/// Builds the time-expanded graph; arcs with transit beyond the horizon yield no copies.
TimeExpandedGraph expand(const PhysicalNetwork& network, int horizon);

}  // namespace ltl
