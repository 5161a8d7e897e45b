#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

namespace emsrag::metrics {

// Retrieval quality for one ranked list against a relevance set. Lists shorter
// than a cutoff are treated as padded with non-relevant entries; a query with
// an empty relevance set scores 0 on every metric and is flagged zero_positive.
struct IrQuery {
    std::vector<std::string> ranked;   // retrieved ids, best first
    std::set<std::string> relevant;    // gold relevant ids
};

struct IrScores {
    double hit = 0.0;        // 1 when any relevant id appears in the top k
    double precision = 0.0;  // |relevant ∩ top k| / k
    double mrr = 0.0;        // 1 / rank of the first relevant id (full list)
    double ap = 0.0;         // average precision over the full list
    bool zero_positive = false;
};

IrScores score_query(const IrQuery& query, std::size_t k);

struct IrAggregate {
    double hit_at_k = 0.0;
    double precision_at_k = 0.0;
    double mrr = 0.0;
    double map = 0.0;
    std::size_t zero_positive_queries = 0;
    std::size_t query_count = 0;
};

// Mean of score_query across queries. Throws EmptyDataset on no queries,
// invalid_argument on k == 0.
IrAggregate aggregate_ir(const std::vector<IrQuery>& queries, std::size_t k);

}  // namespace emsrag::metrics
