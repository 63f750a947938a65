#include "pcc/graph.hpp"

#include "pcc/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>
#include <unordered_map>

namespace pcc {

namespace {

std::optional<long long> parse_integer(const std::string& token) {
    long long value = 0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) return std::nullopt;
    return value;
}

std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> out;
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

bool skip_line(const std::string& line, const std::string& comment_prefix) {
    const auto first = line.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return true;
    return !comment_prefix.empty() && line.compare(first, comment_prefix.size(), comment_prefix) == 0;
}

}  // namespace

int LabelVector::num_classes() const {
    if (values.empty()) return 0;
    return *std::max_element(values.begin(), values.end()) + 1;
}

int LabelVector::distinct() const {
    std::vector<int> v = values;
    std::sort(v.begin(), v.end());
    return static_cast<int>(std::unique(v.begin(), v.end()) - v.begin());
}

Graph Graph::from_edges(std::size_t n, std::span<const std::pair<int, int>> edges,
                        std::vector<std::string> node_ids, std::size_t* self_loops) {
    if (!node_ids.empty() && node_ids.size() != n)
        throw InputError("node id list has " + std::to_string(node_ids.size()) +
                         " entries for " + std::to_string(n) + " nodes");
    Graph g;
    g.adjacency_.resize(n);
    std::size_t loops = 0;
    for (auto [a, b] : edges) {
        if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= n || static_cast<std::size_t>(b) >= n)
            throw InputError("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                             ") outside node range [0, " + std::to_string(n) + ")");
        if (a == b) {
            ++loops;
            continue;
        }
        g.adjacency_[a].push_back(b);
        g.adjacency_[b].push_back(a);
    }
    std::size_t twice = 0;
    for (auto& nb : g.adjacency_) {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
        twice += nb.size();
    }
    g.edges_ = twice / 2;
    if (node_ids.empty()) {
        node_ids.reserve(n);
        for (std::size_t i = 0; i < n; ++i) node_ids.push_back(std::to_string(i));
    }
    g.ids_ = std::move(node_ids);
    if (self_loops) *self_loops = loops;
    return g;
}

bool Graph::has_edge(std::size_t i, std::size_t j) const {
    const auto& nb = adjacency_[i];
    return std::binary_search(nb.begin(), nb.end(), static_cast<int>(j));
}

Eigen::SparseMatrix<double> Graph::adjacency_sparse() const {
    const auto n = static_cast<Eigen::Index>(size());
    Eigen::SparseMatrix<double> a(n, n);
    Eigen::VectorXi per_col(n);
    for (Eigen::Index j = 0; j < n; ++j) per_col[j] = static_cast<int>(adjacency_[j].size());
    a.reserve(per_col);
    // symmetric, so column j's rows are exactly j's neighbours
    for (Eigen::Index j = 0; j < n; ++j)
        for (int i : adjacency_[j]) a.insert(i, j) = 1.0;
    a.makeCompressed();
    return a;
}

Eigen::MatrixXd Graph::adjacency_dense() const {
    const auto n = static_cast<Eigen::Index>(size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (int j : adjacency_[i]) a(i, j) = 1.0;
    return a;
}

std::vector<std::pair<int, int>> Graph::edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(edges_);
    for (std::size_t i = 0; i < size(); ++i)
        for (int j : adjacency_[i])
            if (static_cast<std::size_t>(j) > i) out.emplace_back(static_cast<int>(i), j);
    return out;
}

Graph read_edge_list(std::istream& in, const EdgeListOptions& opts, LoadStats* stats) {
    LoadStats local;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::string> ids;
    std::unordered_map<std::string, int> index;
    long long max_id = -1;

    auto resolve = [&](const std::string& tok, std::size_t line_no) -> int {
        if (opts.ids == IdMode::Strings) {
            auto [it, inserted] = index.try_emplace(tok, static_cast<int>(ids.size()));
            if (inserted) ids.push_back(tok);
            return it->second;
        }
        auto v = parse_integer(tok);
        const long long base = opts.ids == IdMode::OneIndexed ? 1 : 0;
        if (!v || *v < base)
            throw InputError("line " + std::to_string(line_no) + ": node id '" + tok +
                             "' is not an integer >= " + std::to_string(base));
        const long long idx = *v - base;
        if (idx > std::numeric_limits<int>::max() - 1)
            throw InputError("line " + std::to_string(line_no) + ": node id too large");
        max_id = std::max(max_id, idx);
        return static_cast<int>(idx);
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (skip_line(line, opts.comment_prefix)) continue;
        auto tokens = split_ws(line);
        if (tokens.size() != 2)
            throw InputError("line " + std::to_string(line_no) + ": expected two node tokens, got " +
                             std::to_string(tokens.size()));
        ++local.lines;
        const int a = resolve(tokens[0], line_no);
        const int b = resolve(tokens[1], line_no);
        edges.emplace_back(a, b);
    }
    if (in.bad()) throw InputError("read error after line " + std::to_string(line_no));

    std::size_t n = 0;
    if (opts.ids == IdMode::Strings) {
        n = ids.size();
    } else {
        n = std::max<std::size_t>(static_cast<std::size_t>(max_id + 1), opts.declared_nodes);
        const int base = opts.ids == IdMode::OneIndexed ? 1 : 0;
        ids.reserve(n);
        for (std::size_t i = 0; i < n; ++i) ids.push_back(std::to_string(i + base));
    }
    if (n == 0) throw InputError("edge list contains no nodes");

    // canonical (min, max) pairs to count duplicates after direction is dropped
    std::vector<std::pair<int, int>> canon;
    canon.reserve(edges.size());
    for (auto [a, b] : edges)
        if (a != b) canon.emplace_back(std::min(a, b), std::max(a, b));
    std::sort(canon.begin(), canon.end());
    const auto unique_end = std::unique(canon.begin(), canon.end());
    local.duplicate_edges = static_cast<std::size_t>(canon.end() - unique_end);

    Graph g = Graph::from_edges(n, edges, std::move(ids), &local.self_loops);
    if (stats) *stats = local;
    return g;
}

Graph load_edge_list(const std::filesystem::path& path, const EdgeListOptions& opts,
                     LoadStats* stats) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open edge list '" + path.string() + "'");
    return read_edge_list(in, opts, stats);
}

void write_edge_list(const Graph& g, std::ostream& out) {
    for (auto [i, j] : g.edges()) out << g.node_id(i) << ' ' << g.node_id(j) << '\n';
}

void save_edge_list(const Graph& g, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    write_edge_list(g, out);
}

LabelVector read_labels(std::istream& in, const Graph& g, const std::string& comment_prefix) {
    std::unordered_map<std::string, int> index;
    for (std::size_t i = 0; i < g.size(); ++i) index.emplace(g.node_id(i), static_cast<int>(i));

    std::vector<std::optional<std::string>> raw(g.size());
    std::string line;
    std::size_t line_no = 0, entries = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (skip_line(line, comment_prefix)) continue;
        auto tokens = split_ws(line);
        if (tokens.size() != 2)
            throw InputError("label line " + std::to_string(line_no) +
                             ": expected 'node_id label'");
        ++entries;
        auto it = index.find(tokens[0]);
        if (it == index.end())
            throw InputError("label line " + std::to_string(line_no) + ": node '" + tokens[0] +
                             "' is not in the graph (label file/graph size mismatch)");
        auto& slot = raw[it->second];
        if (slot && *slot != tokens[1])
            throw InputError("label line " + std::to_string(line_no) + ": node '" + tokens[0] +
                             "' has conflicting labels");
        slot = tokens[1];
    }
    for (std::size_t i = 0; i < g.size(); ++i)
        if (!raw[i]) throw InputError("node '" + g.node_id(i) + "' has no label");

    std::vector<std::string> distinct;
    for (const auto& r : raw) distinct.push_back(*r);
    std::sort(distinct.begin(), distinct.end(), node_id_less);
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    std::map<std::string, int> code;
    for (std::size_t k = 0; k < distinct.size(); ++k) code.emplace(distinct[k], static_cast<int>(k));

    LabelVector out;
    out.values.reserve(g.size());
    for (const auto& r : raw) out.values.push_back(code.at(*r));
    return out;
}

LabelVector load_labels(const std::filesystem::path& path, const Graph& g,
                        const std::string& comment_prefix) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open label file '" + path.string() + "'");
    return read_labels(in, g, comment_prefix);
}

void write_labels(const Graph& g, const LabelVector& labels, std::ostream& out) {
    for (std::size_t i = 0; i < labels.size(); ++i)
        out << g.node_id(i) << ' ' << labels.values[i] + 1 << '\n';
}

bool node_id_less(const std::string& a, const std::string& b) {
    auto x = parse_integer(a), y = parse_integer(b);
    if (x && y) return *x < *y;
    return a < b;
}

namespace {

std::vector<int> component_ids(const Graph& g, int* count) {
    std::vector<int> comp(g.size(), -1);
    int c = 0;
    std::queue<int> q;
    for (std::size_t s = 0; s < g.size(); ++s) {
        if (comp[s] >= 0) continue;
        comp[s] = c;
        q.push(static_cast<int>(s));
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int v : g.neighbors(u))
                if (comp[v] < 0) {
                    comp[v] = c;
                    q.push(v);
                }
        }
        ++c;
    }
    *count = c;
    return comp;
}

}  // namespace

bool is_connected(const Graph& g) {
    int count = 0;
    component_ids(g, &count);
    return count <= 1;
}

Component largest_connected_component(const Graph& g, const std::optional<LabelVector>& labels) {
    if (labels && labels->size() != g.size())
        throw InputError("label vector length does not match graph");
    Component out;
    if (g.empty()) {
        out.graph = g;
        out.labels = labels;
        return out;
    }
    int count = 0;
    auto comp = component_ids(g, &count);
    std::vector<std::size_t> sizes(count, 0);
    std::vector<int> smallest(count, -1);  // node index with the smallest id in each component
    for (std::size_t i = 0; i < g.size(); ++i) {
        ++sizes[comp[i]];
        int& s = smallest[comp[i]];
        if (s < 0 || node_id_less(g.node_id(i), g.node_id(s))) s = static_cast<int>(i);
    }
    int best = 0;
    for (int c = 1; c < count; ++c) {
        if (sizes[c] > sizes[best] ||
            (sizes[c] == sizes[best] && node_id_less(g.node_id(smallest[c]), g.node_id(smallest[best]))))
            best = c;
    }

    std::vector<int> new_index(g.size(), -1);
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (comp[i] != best) continue;
        new_index[i] = static_cast<int>(out.original_index.size());
        out.original_index.push_back(static_cast<int>(i));
        ids.push_back(g.node_id(i));
    }
    std::vector<std::pair<int, int>> edges;
    for (auto [i, j] : g.edges())
        if (comp[i] == best) edges.emplace_back(new_index[i], new_index[j]);
    out.graph = Graph::from_edges(out.original_index.size(), edges, std::move(ids));
    if (labels) {
        LabelVector sub;
        for (int i : out.original_index) sub.values.push_back(labels->values[i]);
        out.labels = std::move(sub);
    }
    return out;
}

std::vector<int> degrees(const Graph& g) {
    std::vector<int> d(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) d[i] = g.degree(i);
    return d;
}

}  // namespace pcc
