#include "conelab/exterior.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

namespace conelab {

MultiIndex::MultiIndex(std::vector<int> entries, int d)
    : entries_(std::move(entries)) {
  if (entries_.empty()) throw ArgumentError("MultiIndex: empty index");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i] < 1 || entries_[i] > d) {
      throw ArgumentError("MultiIndex: entry out of range");
    }
    if (i > 0 && entries_[i] <= entries_[i - 1]) {
      throw ArgumentError("MultiIndex: entries must be strictly increasing");
    }
  }
}

bool MultiIndex::contains(int i) const {
  return std::binary_search(entries_.begin(), entries_.end(), i);
}

std::string MultiIndex::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) os << ',';
    os << entries_[i];
  }
  os << '}';
  return os.str();
}

MultiIndexTable::MultiIndexTable(int d, int k) : d_(d), k_(k) {
  internal::check_degree(d, k);
  std::vector<int> current(k);
  for (int i = 0; i < k; ++i) current[i] = i + 1;
  while (true) {
    positions_.emplace(MultiIndex(current, d), static_cast<int>(list_.size()));
    list_.emplace_back(current, d);
    // Advance to the lexicographic successor.
    int i = k - 1;
    while (i >= 0 && current[i] == d - k + i + 1) --i;
    if (i < 0) break;
    ++current[i];
    for (int j = i + 1; j < k; ++j) current[j] = current[j - 1] + 1;
  }
}

int MultiIndexTable::position(const MultiIndex& index) const {
  auto it = positions_.find(index);
  if (it == positions_.end()) {
    throw ArgumentError("MultiIndexTable: index " + index.to_string() +
                        " not in table");
  }
  return it->second;
}

TablePtr multi_index_table(int d, int k) {
  internal::check_degree(d, k);
  static std::mutex mutex;
  static std::map<std::pair<int, int>, TablePtr> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{d, k}];
  if (!slot) slot = std::make_shared<const MultiIndexTable>(d, k);
  return slot;
}

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

namespace internal {

void check_degree(int d, int k) {
  if (d < 2) throw ArgumentError("dimension d must be at least 2");
  if (k < 1 || k > d) {
    throw ArgumentError("degree k must satisfy 1 <= k <= d (got k=" +
                        std::to_string(k) + ", d=" + std::to_string(d) + ")");
  }
}

}  // namespace internal

}  // namespace conelab
