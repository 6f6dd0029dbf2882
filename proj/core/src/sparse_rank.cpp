// Incremental echelon rank over Z/p for the large, very sparse matrices that
// come out of blowing up formula realizations.

#include <algorithm>
#include <functional>
#include <queue>

#include "ncrank/exactmat.hpp"

namespace ncrank {

std::size_t sparse_rank_mod(std::vector<SparseRow> rows, std::size_t ncols,
                            const ModField& f) {
  // pivot[c] is the index into `basis` of the row whose leading column is c,
  // stored normalized so that the leading value is 1 (and omitted).
  std::vector<std::int64_t> pivot(ncols, -1);
  std::vector<SparseRow> basis;
  std::vector<std::uint64_t> spa(ncols, 0);
  std::vector<char> queued(ncols, 0);
  std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> heap;

  for (SparseRow& row : rows) {
    for (std::size_t k = 0; k < row.cols.size(); ++k) {
      std::uint32_t c = row.cols[k];
      spa[c] = row.vals[k];
      if (!queued[c]) {
        queued[c] = 1;
        heap.push(c);
      }
    }
    row = SparseRow{};
    while (!heap.empty()) {
      std::uint32_t c = heap.top();
      heap.pop();
      queued[c] = 0;
      std::uint64_t val = spa[c];
      if (val == 0) continue;
      spa[c] = 0;
      if (pivot[c] >= 0) {
        const SparseRow& pr = basis[static_cast<std::size_t>(pivot[c])];
        std::uint64_t nf = f.neg(val);
        for (std::size_t k = 0; k < pr.cols.size(); ++k) {
          std::uint32_t j = pr.cols[k];
          spa[j] = f.add(spa[j], f.mul(nf, pr.vals[k]));
          if (!queued[j]) {
            queued[j] = 1;
            heap.push(j);
          }
        }
        continue;
      }
      // New pivot: drain the rest of the row.
      std::uint64_t inv = f.inv(val);
      SparseRow nr;
      while (!heap.empty()) {
        std::uint32_t j = heap.top();
        heap.pop();
        queued[j] = 0;
        if (spa[j] != 0) {
          nr.cols.push_back(j);
          nr.vals.push_back(f.mul(spa[j], inv));
          spa[j] = 0;
        }
      }
      pivot[c] = static_cast<std::int64_t>(basis.size());
      basis.push_back(std::move(nr));
      break;
    }
    if (basis.size() == ncols) break;
  }
  return basis.size();
}

}  // namespace ncrank
