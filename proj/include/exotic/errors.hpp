#pragma once

#include <stdexcept>
#include <string>

namespace exotic {

// Invalid arguments are reported with std::invalid_argument. The types below
// cover the library-specific failure modes callers may want to tell apart.

class DegenerateCellError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BudgetTooSmallError : public std::invalid_argument {
 public:
  BudgetTooSmallError(const std::string& what, long long minimal_budget)
      : std::invalid_argument(what), minimal_budget_(minimal_budget) {}
  long long minimal_budget() const { return minimal_budget_; }

 private:
  long long minimal_budget_;
};

class UnsupportedProblemError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class GridTooLargeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Raised by the tree search when an inner solve fails; carries the node.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, int depth, int index)
      : std::runtime_error(what), depth_(depth), index_(index) {}
  int depth() const { return depth_; }
  int index() const { return index_; }

 private:
  int depth_;
  int index_;
};

}  // namespace exotic
