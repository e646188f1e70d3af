#pragma once

#include <stdexcept>
#include <string>

namespace fuscat {

// Base for all structured failures.  code() is a stable machine-readable
// identifier; what() carries the human diagnostic (first offending tuple,
// expected vs. actual value, ...).
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& msg)
        : std::runtime_error(msg), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define FUSCAT_DEFINE_ERROR(Name)                                            \
    class Name : public Error {                                              \
    public:                                                                  \
        explicit Name(const std::string& msg) : Error(#Name, msg) {}         \
    }

FUSCAT_DEFINE_ERROR(InvalidTable);       // wrong shape / out-of-range entry
FUSCAT_DEFINE_ERROR(NotLatinSquare);     // repeated element in a row or column
FUSCAT_DEFINE_ERROR(NoIdentity);         // no two-sided identity element
FUSCAT_DEFINE_ERROR(NoInverse);          // some element has no inverse
FUSCAT_DEFINE_ERROR(NotAssociative);     // first violating triple reported
FUSCAT_DEFINE_ERROR(NotACocycle);        // cocycle condition fails at a tuple
FUSCAT_DEFINE_ERROR(NotInGroup);         // element/subset not in the group
FUSCAT_DEFINE_ERROR(AssociativityFailure); // twisted double product not associative
FUSCAT_DEFINE_ERROR(CensusInconsistent); // invariant disagrees inside one class
FUSCAT_DEFINE_ERROR(IoError);            // file/cache read-write problems
FUSCAT_DEFINE_ERROR(InternalError);      // broken internal invariant

#undef FUSCAT_DEFINE_ERROR

// Internal-invariant guard.  Unlike assert() this is active in release
// builds; every exactness claim in the linear algebra is backed by one.
inline void require(bool cond, const std::string& msg) {
    if (!cond) throw InternalError(msg);
}

} // namespace fuscat
