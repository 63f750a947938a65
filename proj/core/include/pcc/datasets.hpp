#pragma once

#include "pcc/graph.hpp"

namespace pcc::datasets {

/// Zachary's karate club: 34 members, 78 ties, node ids "1".."34".
Graph karate();
/// Two factions after the club split (16 instructor, 18 officer).
LabelVector karate_labels();

}  // namespace pcc::datasets
