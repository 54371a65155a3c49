#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

namespace hexatm {

/// Axial coordinate on the triangular grid.
///
/// Planar embedding: x = q + r/2, y = r * sqrt(3)/2, with +x east and +y
/// north. Every lattice edge has unit length in that embedding.
struct AxialCoord {
    int q = 0;
    int r = 0;

    friend constexpr auto operator<=>(const AxialCoord&, const AxialCoord&) = default;

    constexpr AxialCoord operator+(const AxialCoord& o) const { return {q + o.q, r + o.r}; }
    constexpr AxialCoord operator-(const AxialCoord& o) const { return {q - o.q, r - o.r}; }
};

std::ostream& operator<<(std::ostream& os, const AxialCoord& c);

/// Compass heading of a lattice edge: 0 = north, clockwise positive.
/// Only the six values 30, 90, 150, 210, 270 and 330 exist.
class Heading {
public:
    static constexpr std::array<int, 6> kCompassValues{30, 90, 150, 210, 270, 330};

    constexpr Heading() = default;

    /// Throws std::invalid_argument unless `compass` is one of the six values.
    static Heading from_compass(int compass);

    /// Index 0..5 in clockwise order starting at 30 degrees.
    static constexpr Heading from_index(int index) {
        return Heading(((index % 6) + 6) % 6);
    }

    constexpr int compass() const { return 30 + 60 * index_; }
    constexpr int index() const { return index_; }

    /// Unit axial offset travelled along this heading.
    AxialCoord offset() const;

    friend constexpr bool operator==(Heading, Heading) = default;

private:
    constexpr explicit Heading(int index) : index_(index) {}
    int index_ = 0;
};

std::ostream& operator<<(std::ostream& os, Heading h);

/// Rotate clockwise by 60 degrees per step; negative steps turn left.
constexpr Heading rotate(Heading h, int steps_clockwise) {
    return Heading::from_index(h.index() + steps_clockwise);
}

/// True iff the heading has a southward component or is due west (150, 210, 270).
constexpr bool is_south_or_due_west(Heading h) {
    const int c = h.compass();
    return c == 150 || c == 210 || c == 270;
}

/// (intruder - own) mod 360, one of {60, 120, 180, 240, 300}.
/// Throws std::invalid_argument when the headings are equal (same track).
int conflict_angle(Heading own, Heading intruder);

/// Neighbor offsets in canonical order: (1,0) (0,1) (-1,1) (-1,0) (0,-1) (1,-1).
inline constexpr std::array<AxialCoord, 6> kNeighborOffsets{{
    {1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}}};

/// Heading for one of the six unit offsets; nullopt for anything else.
std::optional<Heading> heading_of_offset(AxialCoord offset);

/// Heading from `from` to the adjacent vertex `to`.
/// Throws std::invalid_argument when the two coordinates are not adjacent.
Heading heading_between(AxialCoord from, AxialCoord to);

/// Hex-grid distance (|dq| + |dr| + |dq + dr|) / 2.
constexpr int hex_distance(AxialCoord a, AxialCoord b) {
    const int dq = a.q - b.q;
    const int dr = a.r - b.r;
    const int ds = dq + dr;
    return ((dq < 0 ? -dq : dq) + (dr < 0 ? -dr : dr) + (ds < 0 ? -ds : ds)) / 2;
}

constexpr bool are_adjacent(AxialCoord a, AxialCoord b) { return hex_distance(a, b) == 1; }

/// An undirected edge. (a, b) and (b, a) compare equal.
class EdgeId {
public:
    /// Throws std::invalid_argument when the endpoints are not adjacent.
    EdgeId(AxialCoord a, AxialCoord b);

    AxialCoord first() const { return first_; }
    AxialCoord second() const { return second_; }

    friend auto operator<=>(const EdgeId&, const EdgeId&) = default;

private:
    AxialCoord first_;
    AxialCoord second_;
};

std::ostream& operator<<(std::ostream& os, const EdgeId& e);

/// Regular hexagon of triangular-grid vertices with |q|, |r|, |q + r| <= radius.
///
/// Vertices are stored in (q, r) lexicographic order and addressed by a dense
/// index. Adjacency lists follow kNeighborOffsets order. All-pairs graph
/// distances are tabulated at construction. Immutable afterwards.
class HexLattice {
public:
    using Index = int;
    static constexpr Index kNoVertex = -1;

    explicit HexLattice(int radius);

    int radius() const { return radius_; }
    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t edge_count() const { return edge_count_; }

    bool contains(AxialCoord c) const;
    Index index_of(AxialCoord c) const;  // kNoVertex when outside
    AxialCoord coord(Index i) const { return vertices_[static_cast<std::size_t>(i)]; }
    std::span<const AxialCoord> vertices() const { return vertices_; }

    std::span<const Index> neighbors(Index i) const {
        const auto b = adjacency_offsets_[static_cast<std::size_t>(i)];
        const auto e = adjacency_offsets_[static_cast<std::size_t>(i) + 1];
        return std::span<const Index>(adjacency_.data() + b, e - b);
    }
    std::vector<AxialCoord> neighbors(AxialCoord c) const;

    /// Vertex reached by one step along `h`, kNoVertex when it leaves the lattice.
    Index step(Index from, Heading h) const;

    /// Breadth-first graph distance.
    int distance(Index a, Index b) const {
        return distances_[static_cast<std::size_t>(a) * vertices_.size() + static_cast<std::size_t>(b)];
    }
    int distance(AxialCoord a, AxialCoord b) const;

    /// First vertex after `from` on the canonical shortest path to `to`.
    /// Returns `from` itself when from == to.
    Index next_on_shortest_path(Index from, Index to) const;

private:
    int radius_;
    std::vector<AxialCoord> vertices_;
    std::vector<Index> grid_;  // (2R+1)^2 lookup, kNoVertex outside
    std::vector<std::size_t> adjacency_offsets_;
    std::vector<Index> adjacency_;
    std::vector<int> distances_;
    std::size_t edge_count_ = 0;
};

/// Throws std::invalid_argument for a negative radius.
HexLattice build_lattice(int radius);

/// Minimum-length vertex sequence from `src` to `dst` (inclusive). At each
/// vertex the first neighbor in canonical order that reduces the remaining
/// distance is taken. Throws std::invalid_argument if either end is outside.
std::vector<AxialCoord> shortest_path(const HexLattice& lat, AxialCoord src, AxialCoord dst);

}  // namespace hexatm

template <>
struct std::hash<hexatm::AxialCoord> {
    std::size_t operator()(const hexatm::AxialCoord& c) const noexcept {
        return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.q)) << 32) |
                                          static_cast<std::uint32_t>(c.r));
    }
};
