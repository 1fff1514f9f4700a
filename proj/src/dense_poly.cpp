#include "isoplex/dense_poly.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <tuple>

namespace isoplex {

const std::vector<std::size_t>& product_rank_table(int nvars, int deg_a, int deg_b) {
    static std::mutex mu;
    static std::map<std::tuple<int, int, int>, std::unique_ptr<std::vector<std::size_t>>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[{nvars, deg_a, deg_b}];
    if (!slot) {
        const auto& ta = index_table(nvars, deg_a);
        const auto& tb = index_table(nvars, deg_b);
        auto table = std::make_unique<std::vector<std::size_t>>(ta.size() * tb.size());
        MultiIndex sum(static_cast<std::size_t>(nvars));
        for (std::size_t i = 0; i < ta.size(); ++i)
            for (std::size_t j = 0; j < tb.size(); ++j) {
                for (std::size_t v = 0; v < sum.size(); ++v) sum[v] = ta[i][v] + tb[j][v];
                (*table)[i * tb.size() + j] = multi_index_rank(sum);
            }
        slot = std::move(table);
    }
    return *slot;
}

}  // namespace isoplex
