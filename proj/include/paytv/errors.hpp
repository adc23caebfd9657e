#ifndef PAYTV_ERRORS_HPP
#define PAYTV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace paytv {

enum class Err {
    DuplicateId,
    AuthLocal,
    StaleTimestamp,
    ClockSkew,
    UnknownUser,
    MacMismatch,
    ServerAuth,
    TokenMismatch,
    MalformedMessage,
    BudgetExceeded,
    Overflow,
};

const char* err_name(Err e);

class ProtocolError : public std::runtime_error {
public:
    ProtocolError(Err code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    Err code() const { return code_; }

private:
    Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& what) {
    throw ProtocolError(code, what);
}

} // namespace paytv

#endif
