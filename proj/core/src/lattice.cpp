#include "hexatm/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace hexatm {

namespace {

// Indexed by Heading::index(): 30, 90, 150, 210, 270, 330.
constexpr std::array<AxialCoord, 6> kHeadingOffsets{{
    {0, 1}, {1, 0}, {1, -1}, {0, -1}, {-1, 0}, {-1, 1}}};

}  // namespace

std::ostream& operator<<(std::ostream& os, const AxialCoord& c) {
    return os << '[' << c.q << ',' << c.r << ']';
}

Heading Heading::from_compass(int compass) {
    for (int i = 0; i < 6; ++i) {
        if (kCompassValues[static_cast<std::size_t>(i)] == compass) {
            return Heading(i);
        }
    }
    throw std::invalid_argument("not a lattice heading: " + std::to_string(compass));
}

AxialCoord Heading::offset() const { return kHeadingOffsets[static_cast<std::size_t>(index_)]; }

std::ostream& operator<<(std::ostream& os, Heading h) { return os << h.compass(); }

int conflict_angle(Heading own, Heading intruder) {
    const int angle = ((intruder.compass() - own.compass()) % 360 + 360) % 360;
    if (angle == 0) {
        throw std::invalid_argument("equal headings do not form a conflict angle");
    }
    return angle;
}

std::optional<Heading> heading_of_offset(AxialCoord offset) {
    for (int i = 0; i < 6; ++i) {
        if (kHeadingOffsets[static_cast<std::size_t>(i)] == offset) {
            return Heading::from_index(i);
        }
    }
    return std::nullopt;
}

Heading heading_between(AxialCoord from, AxialCoord to) {
    if (auto h = heading_of_offset(to - from)) {
        return *h;
    }
    throw std::invalid_argument("not an edge: vertices are not adjacent");
}

EdgeId::EdgeId(AxialCoord a, AxialCoord b) : first_(std::min(a, b)), second_(std::max(a, b)) {
    if (!are_adjacent(a, b)) {
        throw std::invalid_argument("not an edge: vertices are not adjacent");
    }
}

std::ostream& operator<<(std::ostream& os, const EdgeId& e) {
    return os << '{' << e.first() << ',' << e.second() << '}';
}

HexLattice::HexLattice(int radius) : radius_(radius) {
    if (radius < 0) {
        throw std::invalid_argument("lattice radius must be nonnegative");
    }
    const int side = 2 * radius + 1;
    grid_.assign(static_cast<std::size_t>(side) * static_cast<std::size_t>(side), kNoVertex);
    for (int q = -radius; q <= radius; ++q) {
        for (int r = -radius; r <= radius; ++r) {
            if (std::abs(q + r) > radius) {
                continue;
            }
            grid_[static_cast<std::size_t>((q + radius) * side + (r + radius))] =
                static_cast<Index>(vertices_.size());
            vertices_.push_back({q, r});
        }
    }

    adjacency_offsets_.reserve(vertices_.size() + 1);
    adjacency_offsets_.push_back(0);
    for (const auto& v : vertices_) {
        for (const auto& off : kNeighborOffsets) {
            const Index n = index_of(v + off);
            if (n != kNoVertex) {
                adjacency_.push_back(n);
            }
        }
        adjacency_offsets_.push_back(adjacency_.size());
    }
    edge_count_ = adjacency_.size() / 2;

    const std::size_t n = vertices_.size();
    distances_.assign(n * n, -1);
    std::vector<Index> queue;
    queue.reserve(n);
    for (std::size_t src = 0; src < n; ++src) {
        int* row = distances_.data() + src * n;
        queue.clear();
        queue.push_back(static_cast<Index>(src));
        row[src] = 0;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const Index u = queue[head];
            for (Index w : neighbors(u)) {
                if (row[w] < 0) {
                    row[w] = row[u] + 1;
                    queue.push_back(w);
                }
            }
        }
    }
}

bool HexLattice::contains(AxialCoord c) const {
    return std::abs(c.q) <= radius_ && std::abs(c.r) <= radius_ && std::abs(c.q + c.r) <= radius_;
}

HexLattice::Index HexLattice::index_of(AxialCoord c) const {
    if (!contains(c)) {
        return kNoVertex;
    }
    const int side = 2 * radius_ + 1;
    return grid_[static_cast<std::size_t>((c.q + radius_) * side + (c.r + radius_))];
}

std::vector<AxialCoord> HexLattice::neighbors(AxialCoord c) const {
    std::vector<AxialCoord> out;
    const Index i = index_of(c);
    if (i == kNoVertex) {
        return out;
    }
    for (Index n : neighbors(i)) {
        out.push_back(coord(n));
    }
    return out;
}

HexLattice::Index HexLattice::step(Index from, Heading h) const {
    return index_of(coord(from) + h.offset());
}

int HexLattice::distance(AxialCoord a, AxialCoord b) const {
    const Index ia = index_of(a);
    const Index ib = index_of(b);
    if (ia == kNoVertex || ib == kNoVertex) {
        throw std::invalid_argument("vertex outside lattice");
    }
    return distance(ia, ib);
}

HexLattice::Index HexLattice::next_on_shortest_path(Index from, Index to) const {
    const int d = distance(from, to);
    if (d == 0) {
        return from;
    }
    for (Index n : neighbors(from)) {
        if (distance(n, to) == d - 1) {
            return n;
        }
    }
    return kNoVertex;  // unreachable on a connected lattice
}

HexLattice build_lattice(int radius) { return HexLattice(radius); }

std::vector<AxialCoord> shortest_path(const HexLattice& lat, AxialCoord src, AxialCoord dst) {
    HexLattice::Index cur = lat.index_of(src);
    const HexLattice::Index goal = lat.index_of(dst);
    if (cur == HexLattice::kNoVertex || goal == HexLattice::kNoVertex) {
        throw std::invalid_argument("shortest_path endpoint outside lattice");
    }
    std::vector<AxialCoord> path{src};
    while (cur != goal) {
        cur = lat.next_on_shortest_path(cur, goal);
        path.push_back(lat.coord(cur));
    }
    return path;
}

}  // namespace hexatm
