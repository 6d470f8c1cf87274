#pragma once

#include <stdexcept>
#include <string>

namespace recontree {

/// A point lies outside the half-open unit cube [0,1)^D.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A requested depth exceeds the tree's storage cap, or the statistics
/// needed at that depth were never computed.
class DepthLimitError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// A cell set violates a structural requirement (root missing, not
/// parent-closed, overlapping leaves, ...).
class StructureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The oracle depth cap is too shallow to certify the untruncated subtree.
class CapTooSmallError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or incompatible file contents.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace recontree
