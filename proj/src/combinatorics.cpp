#include "hierq/combinatorics.hpp"

#include <stdexcept>

namespace hierq {

BigInt binomial(long long a, long long b) {
  if (b < 0 || a < 0 || b > a) return 0;
  if (b > a - b) b = a - b;
  BigInt result = 1;
  for (long long i = 1; i <= b; ++i) {
    result *= a - b + i;
    result /= i;
  }
  return result;
}

BigInt backup_path_count(long long t, int h, int n) {
  if (h < 1 || n < 0) throw std::invalid_argument("require h >= 1, n >= 0");
  if (n == 0) return t == 0 ? 1 : 0;
  // Inclusion-exclusion over compositions of t into n parts in [1, h].
  BigInt total = 0;
  for (int j = 0; j <= n; ++j) {
    BigInt term = binomial(n, j) * binomial(t - static_cast<long long>(h) * j - 1,
                                            static_cast<long long>(n) - 1);
    if (j % 2 == 0)
      total += term;
    else
      total -= term;
  }
  return total;
}

BigInt total_backup_paths(int h, int n) {
  if (h < 1 || n < 0) throw std::invalid_argument("require h >= 1, n >= 0");
  BigInt total = 0;
  for (long long t = n; t <= static_cast<long long>(n) * h; ++t)
    total += backup_path_count(t, h, n);
  return total;
}

long long sparsified_path_count(int h, int n) {
  if (h < 1 || n < 1) throw std::invalid_argument("require h >= 1, n >= 1");
  return static_cast<long long>(h) * n;
}

namespace {

void enumerate_rec(int remaining, int h, int parts_left,
                   std::vector<int>& prefix,
                   std::vector<std::vector<int>>& out) {
  if (parts_left == 0) {
    if (remaining == 0) out.push_back(prefix);
    return;
  }
  // Prune: the remaining parts must be able to sum to `remaining`.
  if (remaining < parts_left || remaining > parts_left * h) return;
  for (int d = 1; d <= h; ++d) {
    prefix.push_back(d);
    enumerate_rec(remaining - d, h, parts_left - 1, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<std::vector<int>> enumerate_backup_paths(int t, int h, int n) {
  if (h < 1 || n < 0) throw std::invalid_argument("require h >= 1, n >= 0");
  if (backup_path_count(t, h, n) > 10'000'000)
    throw std::length_error("enumeration would exceed 1e7 sequences");
  std::vector<std::vector<int>> out;
  std::vector<int> prefix;
  enumerate_rec(t, h, n, prefix, out);
  return out;
}

}  // namespace hierq
