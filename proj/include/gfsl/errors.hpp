#pragma once

#include <stdexcept>
#include <string>

namespace gfsl {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument sits on a pole of the function being evaluated.
class PoleError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

// Requested tolerance not reached; achieved() is the best bound obtained.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double achieved)
        : Error(what), achieved_(achieved) {}
    double achieved() const { return achieved_; }

private:
    double achieved_;
};

// Two routes to the same quantity disagree.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

// Resource limit hit; progress() describes how far the computation got.
class BudgetError : public Error {
public:
    BudgetError(const std::string& what, double progress)
        : Error(what), progress_(progress) {}
    double progress() const { return progress_; }

private:
    double progress_;
};

// Test function mass extends past the available data.
class CompletenessError : public Error {
public:
    CompletenessError(const std::string& what, double leakage)
        : Error(what), leakage_(leakage) {}
    double leakage() const { return leakage_; }

private:
    double leakage_;
};

}  // namespace gfsl
