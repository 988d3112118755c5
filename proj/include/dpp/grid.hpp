#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dpp {

/// Raised for malformed inputs (bad grid specs, out-of-range vertices, invalid trajectories).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Connectivity { four = 4, eight = 8 };

std::string to_string(Connectivity c);
Connectivity connectivity_from_string(const std::string& s);

struct Position {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Position&, const Position&) = default;
};

double distance(const Position& a, const Position& b);

/// Grid vertex. Ordered by (row, col), which is the deterministic order used
/// for neighbor lists and tie-breaks.
struct Vertex {
  int col = 0;
  int row = 0;

  friend bool operator==(const Vertex&, const Vertex&) = default;
  friend std::strong_ordering operator<=>(const Vertex& a, const Vertex& b) {
    if (auto c = a.row <=> b.row; c != 0) return c;
    return a.col <=> b.col;
  }
};

struct GridSpec {
  int width_cells = 2;
  int height_cells = 2;
  double world_width = 1.0;
  double world_height = 1.0;
  Connectivity connectivity = Connectivity::four;
  // Vertices removed from the graph. Empty for the open-square worlds.
  std::vector<Vertex> blocked;

  double pitch_x() const { return world_width / (width_cells - 1); }
  double pitch_y() const { return world_height / (height_cells - 1); }

  /// Throws InvalidArgument when the dimensions are unusable.
  void validate() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct Neighbor {
  Vertex vertex;
  double length = 0.0;
};

/// Immutable grid graph embedded in the rectangle [0, world_width] x [0, world_height].
class GridGraph {
 public:
  struct Edge {
    int to = 0;
    double length = 0.0;
  };

  explicit GridGraph(GridSpec spec);

  const GridSpec& spec() const { return spec_; }
  int vertex_count() const { return spec_.width_cells * spec_.height_cells; }
  std::size_t edge_count() const;  // directed edges

  bool contains(const Vertex& v) const;
  bool is_blocked(const Vertex& v) const;

  int index_of(const Vertex& v) const { return v.row * spec_.width_cells + v.col; }
  Vertex vertex_at(int index) const {
    return Vertex{index % spec_.width_cells, index / spec_.width_cells};
  }

  Position position(const Vertex& v) const;
  const Position& position(int index) const { return positions_[index]; }

  /// Edges out of a vertex index, sorted by (row, col) of the target.
  std::span<const Edge> edges(int index) const { return adjacency_[index]; }

  std::vector<Neighbor> neighbors(const Vertex& v) const;

  /// Closest free vertex to p; ties go to the smaller (row, col).
  Vertex nearest_vertex(const Position& p) const;

 private:
  void require(const Vertex& v) const;

  GridSpec spec_;
  std::vector<char> blocked_;
  std::vector<Position> positions_;
  std::vector<std::vector<Edge>> adjacency_;
};

GridGraph build_grid(const GridSpec& spec);

}  // namespace dpp
