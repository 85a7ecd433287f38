#include "vianalab/scc.hpp"

#include <algorithm>

namespace viana {

SccResult strongly_connected_components(std::int64_t n,
                                        const std::vector<std::int64_t>& row_ptr,
                                        const std::vector<std::int32_t>& col) {
    SccResult res;
    res.comp.assign(n, -1);
    std::vector<std::int32_t> index(n, -1), lowlink(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::int32_t> stack;
    std::int32_t next_index = 0;

    struct Frame {
        std::int32_t v;
        std::int64_t edge;
    };
    std::vector<Frame> call;

    for (std::int64_t root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        call.push_back({static_cast<std::int32_t>(root), row_ptr[root]});
        index[root] = lowlink[root] = next_index++;
        stack.push_back(static_cast<std::int32_t>(root));
        on_stack[root] = true;

        while (!call.empty()) {
            Frame& f = call.back();
            if (f.edge < row_ptr[f.v + 1]) {
                std::int32_t w = col[f.edge++];
                if (index[w] == -1) {
                    index[w] = lowlink[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, row_ptr[w]});
                } else if (on_stack[w]) {
                    lowlink[f.v] = std::min(lowlink[f.v], index[w]);
                }
            } else {
                std::int32_t v = f.v;
                call.pop_back();
                if (!call.empty())
                    lowlink[call.back().v] = std::min(lowlink[call.back().v], lowlink[v]);
                if (lowlink[v] == index[v]) {
                    std::int32_t cid = res.n_comp++;
                    std::int64_t sz = 0;
                    while (true) {
                        std::int32_t w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        res.comp[w] = cid;
                        ++sz;
                        if (w == v) break;
                    }
                    res.sizes.push_back(sz);
                }
            }
        }
    }

    auto it = std::max_element(res.sizes.begin(), res.sizes.end());
    if (it != res.sizes.end()) res.largest = static_cast<std::int32_t>(it - res.sizes.begin());

    // terminal components: no edge leaving the component
    std::vector<bool> leaves(res.n_comp, false);
    for (std::int64_t v = 0; v < n; ++v)
        for (std::int64_t e = row_ptr[v]; e < row_ptr[v + 1]; ++e)
            if (res.comp[col[e]] != res.comp[v]) leaves[res.comp[v]] = true;
    for (bool l : leaves)
        if (!l) ++res.n_terminal;
    return res;
}

}  // namespace viana
