#pragma once
// Error taxonomy shared by every module. One exception type, coded.

#include <stdexcept>
#include <string>

namespace cogmem {

enum class Errc {
    MalformedKref,
    DuplicateItem,
    UnknownItem,
    UnknownRevision,
    NoRevision,
    IllegalSupersedes,
    NoSuchBinding,
    DeprecatedExcluded,
    EmptyContent,
    CorruptSnapshot,
    DepthOutOfRange,
    NoProvider,
    AssessorFailure,
    CursorCorrupt,
    NoCursor,
    InvalidOption,
    IoError,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

} // namespace cogmem
