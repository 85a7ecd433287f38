#pragma once

#include <cstdint>
#include <vector>

namespace viana {

struct SccResult {
    std::vector<std::int32_t> comp;  // component id per node
    std::int32_t n_comp = 0;
    std::vector<std::int64_t> sizes;         // per component
    std::int32_t largest = -1;               // id of the largest component
    std::int64_t n_terminal = 0;             // components with no outgoing edges
};

// Tarjan on a CSR digraph, iterative (safe for large graphs).
SccResult strongly_connected_components(std::int64_t n,
                                        const std::vector<std::int64_t>& row_ptr,
                                        const std::vector<std::int32_t>& col);

}  // namespace viana
