#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

namespace hierq {

using BigInt = boost::multiprecision::cpp_int;

// Binomial coefficient with C(a, b) = 0 for a < 0, b < 0 or a < b; exact
// arithmetic via the multiplicative formula.
BigInt binomial(long long a, long long b);

// Number of ordered jump sequences (d_1..d_n), d_i in [1, h], summing to t:
// the number of backup paths of depth t with n jumps of span at most h.
BigInt backup_path_count(long long t, int h, int n);

// Sum of backup_path_count over all feasible depths d in [n, n*h];
// equals h^n.
BigInt total_backup_paths(int h, int n);

// Update targets touched by the stride-sparsified scheme: n * h.
long long sparsified_path_count(int h, int n);

// Exhaustive enumeration oracle; throws std::length_error when the result
// would exceed the guard of 1e7 sequences.
std::vector<std::vector<int>> enumerate_backup_paths(int t, int h, int n);

}  // namespace hierq
