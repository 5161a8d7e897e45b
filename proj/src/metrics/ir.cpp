#include "emsrag/metrics/ir.hpp"

#include <algorithm>
#include <stdexcept>

#include "emsrag/common/error.hpp"

namespace emsrag::metrics {

IrScores score_query(const IrQuery& query, std::size_t k) {
    if (k == 0) throw std::invalid_argument("k must be positive");

    IrScores scores;
    if (query.relevant.empty()) {
        scores.zero_positive = true;
        return scores;  // all metrics pinned to 0
    }

    std::size_t hits_at_k = 0;
    std::size_t hits_so_far = 0;
    double ap_sum = 0.0;
    for (std::size_t rank = 0; rank < query.ranked.size(); ++rank) {
        const bool rel = query.relevant.count(query.ranked[rank]) > 0;
        if (!rel) continue;
        ++hits_so_far;
        if (rank < k) ++hits_at_k;
        if (scores.mrr == 0.0) scores.mrr = 1.0 / static_cast<double>(rank + 1);
        ap_sum += static_cast<double>(hits_so_far) / static_cast<double>(rank + 1);
    }
    scores.hit = hits_at_k > 0 ? 1.0 : 0.0;
    // short lists count as padded with non-relevant entries: divide by k, not list size
    scores.precision = static_cast<double>(hits_at_k) / static_cast<double>(k);
    scores.ap = ap_sum / static_cast<double>(query.relevant.size());
    return scores;
}

IrAggregate aggregate_ir(const std::vector<IrQuery>& queries, std::size_t k) {
    if (queries.empty()) throw EmptyDataset("no queries to score");
    IrAggregate agg;
    agg.query_count = queries.size();
    for (const IrQuery& query : queries) {
        const IrScores s = score_query(query, k);
        agg.hit_at_k += s.hit;
        agg.precision_at_k += s.precision;
        agg.mrr += s.mrr;
        agg.map += s.ap;
        if (s.zero_positive) ++agg.zero_positive_queries;
    }
    const double n = static_cast<double>(queries.size());
    agg.hit_at_k /= n;
    agg.precision_at_k /= n;
    agg.mrr /= n;
    agg.map /= n;
    return agg;
}

}  // namespace emsrag::metrics
