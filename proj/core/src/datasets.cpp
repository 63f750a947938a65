#include "pcc/datasets.hpp"

#include <array>
#include <string>
#include <utility>

namespace pcc::datasets {

namespace {

// members numbered 1..34
constexpr std::array<std::pair<int, int>, 78> kKarateEdges{{
    {1, 2}, {1, 3}, {1, 4}, {1, 5}, {1, 6}, {1, 7}, {1, 8}, {1, 9}, {1, 11}, {1, 12},
    {1, 13}, {1, 14}, {1, 18}, {1, 20}, {1, 22}, {1, 32}, {2, 3}, {2, 4}, {2, 8}, {2, 14},
    {2, 18}, {2, 20}, {2, 22}, {2, 31}, {3, 4}, {3, 8}, {3, 9}, {3, 10}, {3, 14}, {3, 28},
    {3, 29}, {3, 33}, {4, 8}, {4, 13}, {4, 14}, {5, 7}, {5, 11}, {6, 7}, {6, 11}, {6, 17},
    {7, 17}, {9, 31}, {9, 33}, {9, 34}, {10, 34}, {14, 34}, {15, 33}, {15, 34}, {16, 33}, {16, 34},
    {19, 33}, {19, 34}, {20, 34}, {21, 33}, {21, 34}, {23, 33}, {23, 34}, {24, 26}, {24, 28}, {24, 30},
    {24, 33}, {24, 34}, {25, 26}, {25, 28}, {25, 32}, {26, 32}, {27, 30}, {27, 34}, {28, 34}, {29, 32},
    {29, 34}, {30, 33}, {30, 34}, {31, 33}, {31, 34}, {32, 33}, {32, 34}, {33, 34}
}};

// 1 = instructor faction, 2 = officer faction
constexpr std::array<int, 34> kKarateFaction{
    1, 1, 1, 1, 1, 1, 1, 1, 2, 2, 1, 1, 1, 1, 2, 2, 1, 1, 2, 1, 2, 1, 2, 2, 2, 2, 2, 2, 2, 2, 2,
    2, 2, 2
};

}  // namespace

Graph karate() {
    std::vector<std::pair<int, int>> edges;
    edges.reserve(kKarateEdges.size());
    for (auto [a, b] : kKarateEdges) edges.emplace_back(a - 1, b - 1);
    std::vector<std::string> ids;
    for (int i = 1; i <= 34; ++i) ids.push_back(std::to_string(i));
    return Graph::from_edges(34, edges, std::move(ids));
}

LabelVector karate_labels() {
    LabelVector out;
    for (int f : kKarateFaction) out.values.push_back(f - 1);
    return out;
}

}  // namespace pcc::datasets
