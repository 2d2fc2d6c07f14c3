#pragma once

#include <stdexcept>

namespace wqkd {

// A probability estimate was requested from counts whose total is zero.
class ZeroTotalCounts : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A Wigner estimate needs a setting combination that has no counts.
class MissingSetting : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A session produced too little data to estimate the security parameters.
class InsufficientStatistics : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wqkd
