#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace dentropy {

enum class ErrorCode {
  InvalidArgument,
  BoundaryMinimum,
  ResourceBudget,
  Io,
  Parse,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(ErrorCode::InvalidArgument, what) {}
};

class ResourceBudgetError : public Error {
 public:
  ResourceBudgetError(const std::string& what, std::uint64_t budget)
      : Error(ErrorCode::ResourceBudget, what), budget_(budget) {}
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  std::uint64_t budget_;
};

class IoError : public Error {
 public:
  IoError(const std::string& what, std::string path)
      : Error(ErrorCode::Io, what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(ErrorCode::Parse, what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

enum class BoundarySide { Lower, Upper };

inline const char* to_string(BoundarySide side) {
  return side == BoundarySide::Lower ? "lower" : "upper";
}

/// The derivative minimum sits on the first or last grid point, so the
/// grid has to be widened on that side before a selection is meaningful.
class BoundaryMinimumError : public Error {
 public:
  BoundaryMinimumError(BoundarySide side, std::size_t index,
                       std::optional<std::uint64_t> sample_size = std::nullopt)
      : Error(ErrorCode::BoundaryMinimum, message(side, index, sample_size)),
        side_(side),
        index_(index),
        sample_size_(sample_size) {}

  BoundarySide side() const noexcept { return side_; }
  std::size_t index() const noexcept { return index_; }
  std::optional<std::uint64_t> sample_size() const noexcept { return sample_size_; }

  BoundaryMinimumError with_sample_size(std::uint64_t n) const {
    return BoundaryMinimumError(side_, index_, n);
  }

 private:
  static std::string message(BoundarySide side, std::size_t index,
                             std::optional<std::uint64_t> n) {
    std::string msg = "derivative minimum at the " + std::string(to_string(side)) +
                      " grid boundary (index " + std::to_string(index) + ")";
    if (n) msg += " for N=" + std::to_string(*n);
    return msg + "; widen the grid on that side";
  }

  BoundarySide side_;
  std::size_t index_;
  std::optional<std::uint64_t> sample_size_;
};

}  // namespace dentropy
