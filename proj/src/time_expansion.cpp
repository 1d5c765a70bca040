#include "ltl/time_expansion.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

#include <fmt/format.h>

#include "ltl/error.hpp"

namespace ltl {

TimeExpandedGraph expand(const PhysicalNetwork& network, int horizon) {
    if (horizon < 0) throw ValidationError(fmt::format("horizon must be >= 0, got {}", horizon));

    TimeExpandedGraph g;
    g.horizon_ = horizon;
    g.network_ = network;

    const auto& hubs = network.hubs();
    const std::size_t width = static_cast<std::size_t>(horizon) + 1;

    std::vector<std::size_t> order(hubs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return hubs[a].id < hubs[b].id; });
    g.hub_rank_by_index_.resize(hubs.size());
    for (std::size_t r = 0; r < order.size(); ++r) {
        g.hub_order_.push_back(hubs[order[r]].id);
        g.hub_rank_by_index_[order[r]] = r;
    }

    g.nodes_.reserve(hubs.size() * width);
    for (HubId id : g.hub_order_)
        for (int t = 0; t <= horizon; ++t) g.nodes_.push_back({id, t});

    auto node_of = [&](HubId hub, int t) {
        return g.hub_rank_by_index_[network.hub_index(hub)] * width + static_cast<std::size_t>(t);
    };

    for (HubId id : g.hub_order_) {
        for (int t = 0; t < horizon; ++t) {
            TimedArc a;
            a.kind = ArcKind::Hold;
            a.tail = node_of(id, t);
            a.head = node_of(id, t + 1);
            a.tail_hub = a.head_hub = id;
            a.tail_t = t;
            a.head_t = t + 1;
            a.transit = 1;
            g.arcs_.push_back(a);
        }
    }
    g.holds_ = g.arcs_.size();

    const auto& parcs = network.arcs();
    for (std::size_t p = 0; p < parcs.size(); ++p) {
        const auto& pa = parcs[p];
        for (int t = 0; t + pa.transit_time <= horizon; ++t) {
            TimedArc a;
            a.kind = ArcKind::Move;
            a.tail = node_of(pa.from, t);
            a.head = node_of(pa.to, t + pa.transit_time);
            a.tail_hub = pa.from;
            a.head_hub = pa.to;
            a.tail_t = t;
            a.head_t = t + pa.transit_time;
            a.phys = p;
            a.transit = pa.transit_time;
            a.distance_miles = pa.distance_miles;
            g.arcs_.push_back(a);
        }
    }

    std::stable_sort(g.arcs_.begin(), g.arcs_.end(), [](const TimedArc& a, const TimedArc& b) {
        return std::tuple(a.tail_hub, a.tail_t, a.head_hub, a.kind) <
               std::tuple(b.tail_hub, b.tail_t, b.head_hub, b.kind);
    });

    // CSR adjacency; arcs are visited in global order so each list keeps that order.
    const std::size_t n = g.nodes_.size();
    g.out_start_.assign(n + 1, 0);
    g.in_start_.assign(n + 1, 0);
    for (const auto& a : g.arcs_) {
        ++g.out_start_[a.tail + 1];
        ++g.in_start_[a.head + 1];
    }
    std::partial_sum(g.out_start_.begin(), g.out_start_.end(), g.out_start_.begin());
    std::partial_sum(g.in_start_.begin(), g.in_start_.end(), g.in_start_.begin());
    g.out_list_.resize(g.arcs_.size());
    g.in_list_.resize(g.arcs_.size());
    auto out_fill = g.out_start_;
    auto in_fill = g.in_start_;
    for (ArcIndex i = 0; i < g.arcs_.size(); ++i) {
        g.out_list_[out_fill[g.arcs_[i].tail]++] = i;
        g.in_list_[in_fill[g.arcs_[i].head]++] = i;
    }
    return g;
}

NodeIndex TimeExpandedGraph::node_index(HubId hub, int t) const {
    if (!network_.has_hub(hub) || t < 0 || t > horizon_)
        throw ValidationError(fmt::format("no timed node ({}, {})", hub, t));
    return hub_rank_by_index_[network_.hub_index(hub)] * (static_cast<std::size_t>(horizon_) + 1) +
           static_cast<std::size_t>(t);
}

std::span<const ArcIndex> TimeExpandedGraph::out_arcs(NodeIndex i) const {
    if (i >= nodes_.size()) throw ValidationError(fmt::format("no timed node with index {}", i));
    return {out_list_.data() + out_start_[i], out_start_[i + 1] - out_start_[i]};
}

std::span<const ArcIndex> TimeExpandedGraph::in_arcs(NodeIndex i) const {
    if (i >= nodes_.size()) throw ValidationError(fmt::format("no timed node with index {}", i));
    return {in_list_.data() + in_start_[i], in_start_[i + 1] - in_start_[i]};
}

std::vector<TimedArc> TimeExpandedGraph::out_arcs(const TimedNode& n) const {
    std::vector<TimedArc> r;
    for (auto a : out_arcs(node_index(n))) r.push_back(arcs_[a]);
    return r;
}

std::vector<TimedArc> TimeExpandedGraph::in_arcs(const TimedNode& n) const {
    std::vector<TimedArc> r;
    for (auto a : in_arcs(node_index(n))) r.push_back(arcs_[a]);
    return r;
}

}  // namespace ltl
