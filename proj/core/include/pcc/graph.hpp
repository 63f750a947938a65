#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pcc {

/// Community assignment, one entry per node.
///
/// Stored 0-based; files and reports use 1-based labels.
struct LabelVector {
    std::vector<int> values;

    std::size_t size() const { return values.size(); }
    /// Largest label + 1 (0 for an empty vector).
    int num_classes() const;
    /// Number of distinct labels actually used.
    int distinct() const;

    friend bool operator==(const LabelVector&, const LabelVector&) = default;
};

/// Undirected simple graph: symmetric, hollow, binary adjacency.
///
/// Stored as sorted neighbour lists. Immutable after construction.
class Graph {
public:
    Graph() = default;

    /// Builds a graph on `n` nodes. Duplicate edges are merged, direction is
    /// ignored and self-loops are dropped (counted in `self_loops` if given).
    /// Throws InputError for endpoints outside [0, n) or a node id list whose
    /// length differs from n.
    static Graph from_edges(std::size_t n, std::span<const std::pair<int, int>> edges,
                            std::vector<std::string> node_ids = {},
                            std::size_t* self_loops = nullptr);

    std::size_t size() const { return adjacency_.size(); }
    std::size_t edge_count() const { return edges_; }
    bool empty() const { return adjacency_.empty(); }

    const std::vector<int>& neighbors(std::size_t i) const { return adjacency_[i]; }
    bool has_edge(std::size_t i, std::size_t j) const;
    int degree(std::size_t i) const { return static_cast<int>(adjacency_[i].size()); }

    /// Original identifier of internal node i.
    const std::string& node_id(std::size_t i) const { return ids_[i]; }
    const std::vector<std::string>& node_ids() const { return ids_; }

    Eigen::SparseMatrix<double> adjacency_sparse() const;
    Eigen::MatrixXd adjacency_dense() const;

    /// Each undirected edge once, as (i, j) with i < j, in row-major order.
    std::vector<std::pair<int, int>> edges() const;

private:
    std::vector<std::vector<int>> adjacency_;
    std::vector<std::string> ids_;
    std::size_t edges_ = 0;
};

enum class IdMode {
    /// Arbitrary string tokens; indices assigned in first-appearance order.
    Strings,
    /// Integer ids starting at 0; node count is max id + 1.
    ZeroIndexed,
    /// Integer ids starting at 1; node count is max id.
    OneIndexed,
};

struct EdgeListOptions {
    IdMode ids = IdMode::Strings;
    std::string comment_prefix = "#";
    /// Minimum node count for the integer modes (isolated trailing nodes).
    std::size_t declared_nodes = 0;
};

struct LoadStats {
    std::size_t lines = 0;
    std::size_t self_loops = 0;
    std::size_t duplicate_edges = 0;
};

Graph read_edge_list(std::istream& in, const EdgeListOptions& opts = {},
                     LoadStats* stats = nullptr);
Graph load_edge_list(const std::filesystem::path& path, const EdgeListOptions& opts = {},
                     LoadStats* stats = nullptr);

/// Writes "id_i id_j" per edge, using the graph's node ids.
void write_edge_list(const Graph& g, std::ostream& out);
void save_edge_list(const Graph& g, const std::filesystem::path& path);

/// Reads "node_id label" lines and maps them onto `g`'s nodes.
///
/// Label tokens are remapped to contiguous 0..K-1 by sorted token order
/// (numerically when every token is an integer), so the result does not
/// depend on line order.
LabelVector read_labels(std::istream& in, const Graph& g, const std::string& comment_prefix = "#");
LabelVector load_labels(const std::filesystem::path& path, const Graph& g,
                        const std::string& comment_prefix = "#");

/// Writes "node_id label" with 1-based labels.
void write_labels(const Graph& g, const LabelVector& labels, std::ostream& out);

struct Component {
    Graph graph;
    std::optional<LabelVector> labels;
    /// original_index[new_i] is the node's index in the input graph.
    std::vector<int> original_index;
};

/// Largest connected component; ties go to the component holding the
/// smallest original node id. Node order is preserved.
Component largest_connected_component(const Graph& g,
                                      const std::optional<LabelVector>& labels = std::nullopt);

bool is_connected(const Graph& g);

std::vector<int> degrees(const Graph& g);

/// Orders node id tokens numerically when both parse as integers,
/// lexicographically otherwise.
bool node_id_less(const std::string& a, const std::string& b);

}  // namespace pcc
