#pragma once

#include <cstdint>

namespace sgdlog {

// Per-run query accounting. product_queries counts real black-box product
// calls; permutation_queries counts accesses to the hidden permutation of the
// lower-bound construction; charged_queries accrues the idealized cost of
// simulated quantum subroutines under the active accounting rule.
struct QueryMeter {
  uint64_t product_queries = 0;
  uint64_t permutation_queries = 0;
  uint64_t charged_queries = 0;

  void reset() { *this = QueryMeter{}; }

  QueryMeter operator-(const QueryMeter& o) const {
    return {product_queries - o.product_queries,
            permutation_queries - o.permutation_queries,
            charged_queries - o.charged_queries};
  }
};

}  // namespace sgdlog
