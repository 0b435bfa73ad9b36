#pragma once

#include <stdexcept>
#include <string>

namespace selmer {

/// Error categories map one-to-one onto CLI exit codes.
enum class ErrorKind { precondition, budget, internal };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string module, std::string op, const std::string& msg)
        : std::runtime_error(module + "." + op + ": " + msg),
          kind_(kind), module_(std::move(module)), op_(std::move(op)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& module() const noexcept { return module_; }
    const std::string& op() const noexcept { return op_; }

    int exit_code() const noexcept {
        switch (kind_) {
        case ErrorKind::precondition: return 2;
        case ErrorKind::budget: return 3;
        case ErrorKind::internal: return 4;
        }
        return 4;
    }

private:
    ErrorKind kind_;
    std::string module_;
    std::string op_;
};

[[noreturn]] inline void fail_pre(const char* module, const char* op, const std::string& msg) {
    throw Error(ErrorKind::precondition, module, op, msg);
}
[[noreturn]] inline void fail_budget(const char* module, const char* op, const std::string& msg) {
    throw Error(ErrorKind::budget, module, op, msg);
}
[[noreturn]] inline void fail_internal(const char* module, const char* op, const std::string& msg) {
    throw Error(ErrorKind::internal, module, op, msg);
}

#define SELMER_CHECK(cond, module, op, msg) \
    do { if (!(cond)) ::selmer::fail_internal(module, op, msg); } while (0)

} // namespace selmer
