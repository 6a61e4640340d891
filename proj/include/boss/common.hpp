#ifndef BOSS_COMMON_HPP
#define BOSS_COMMON_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace boss {

/// Dense variable index in [0, p).
using Var = std::size_t;

/// Sorted, duplicate-free list of variables.
using VarSet = std::vector<Var>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller handed in something that violates an operation's precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Input data cannot be scored (non-finite cells, constant columns, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

/// cov[W, W] is numerically singular or the residual variance is not positive.
class DegenerateParentSet : public DataError {
 public:
  using DataError::DataError;
};

/// SplitMix64 finalizer. Used to derive independent seeds from a base seed.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return mix64(base ^ mix64(stream + 1));
}

}  // namespace boss

#endif  // BOSS_COMMON_HPP
