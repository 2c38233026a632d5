#pragma once

#include <stdexcept>
#include <string>

namespace bmhull {

/// Invalid argument or violated precondition on an operation.
class ArgumentError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

/// A hypothesis of a lemma-style routine failed; `hypothesis()` names it.
class PreconditionError : public ArgumentError
{
  public:
    PreconditionError(std::string hypothesis, const std::string& what)
        : ArgumentError(what), hypothesis_(std::move(hypothesis))
    {
    }
    const std::string& hypothesis() const { return hypothesis_; }

  private:
    std::string hypothesis_;
};

/// Affinely dependent input where full rank was required.
class DegeneracyError : public std::runtime_error
{
  public:
    DegeneracyError(int rank, const std::string& what) : std::runtime_error(what), rank_(rank) {}
    /// Detected affine rank of the offending point set.
    int rank() const { return rank_; }

  private:
    int rank_;
};

/// An exhaustive search failed to find an object whose existence is
/// guaranteed; this signals numerical degeneracy in the input.
class LemmaViolation : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

} // namespace bmhull
