#include "isoplex/multi_index.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace isoplex {

namespace {

std::size_t binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

void enumerate(int nvars, int remaining, int var, MultiIndex& cur, std::vector<MultiIndex>& out) {
    if (var == nvars - 1) {
        cur[static_cast<std::size_t>(var)] = remaining;
        out.push_back(cur);
        return;
    }
    for (int e = remaining; e >= 0; --e) {
        cur[static_cast<std::size_t>(var)] = e;
        enumerate(nvars, remaining - e, var + 1, cur, out);
    }
}

}  // namespace

std::size_t multi_index_count(int nvars, int degree) {
    if (nvars <= 0 || degree < 0) return 0;
    return binomial(static_cast<std::size_t>(degree + nvars - 1), static_cast<std::size_t>(nvars - 1));
}

std::size_t multi_index_rank(std::span<const int> alpha) {
    std::size_t rank = 0;
    std::size_t prefix = 0;
    for (std::size_t j = 1; j < alpha.size(); ++j) {
        prefix += static_cast<std::size_t>(alpha[j - 1]);
        rank += binomial(prefix + j - 1, j);
    }
    return rank;
}

std::uint64_t factorial(int n) {
    if (n < 0 || n > 20) throw std::out_of_range("factorial argument out of range");
    std::uint64_t r = 1;
    for (int i = 2; i <= n; ++i) r *= static_cast<std::uint64_t>(i);
    return r;
}

IndexTable::IndexTable(int nvars, int degree) : nvars_(nvars), degree_(degree) {
    if (nvars <= 0 || degree < 0) throw std::invalid_argument("bad index table shape");
    std::vector<MultiIndex> all;
    MultiIndex cur(static_cast<std::size_t>(nvars), 0);
    enumerate(nvars, degree, 0, cur, all);
    entries_.resize(all.size());
    for (auto& a : all) {
        const std::size_t r = multi_index_rank(a);
        entries_[r] = std::move(a);
    }
    bernstein_factor_.resize(entries_.size());
    for (std::size_t r = 0; r < entries_.size(); ++r) {
        // alpha!/d! as a product of ratios to stay finite for larger degrees
        double f = 1.0;
        int top = degree;
        for (int e : entries_[r])
            for (int i = 1; i <= e; ++i) f *= static_cast<double>(i) / static_cast<double>(top--);
        bernstein_factor_[r] = f;
    }
    vertex_rank_.resize(static_cast<std::size_t>(nvars));
    for (int i = 0; i < nvars; ++i) {
        MultiIndex v(static_cast<std::size_t>(nvars), 0);
        v[static_cast<std::size_t>(i)] = degree;
        vertex_rank_[static_cast<std::size_t>(i)] = multi_index_rank(v);
    }
}

const IndexTable& index_table(int nvars, int degree) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<IndexTable>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[{nvars, degree}];
    if (!slot) slot = std::make_unique<IndexTable>(nvars, degree);
    return *slot;
}

}  // namespace isoplex
