#include "cogmem/errors.hpp"

namespace cogmem {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::MalformedKref: return "MalformedKref";
        case Errc::DuplicateItem: return "DuplicateItem";
        case Errc::UnknownItem: return "UnknownItem";
        case Errc::UnknownRevision: return "UnknownRevision";
        case Errc::NoRevision: return "NoRevision";
        case Errc::IllegalSupersedes: return "IllegalSupersedes";
        case Errc::NoSuchBinding: return "NoSuchBinding";
        case Errc::DeprecatedExcluded: return "DeprecatedExcluded";
        case Errc::EmptyContent: return "EmptyContent";
        case Errc::CorruptSnapshot: return "CorruptSnapshot";
        case Errc::DepthOutOfRange: return "DepthOutOfRange";
        case Errc::NoProvider: return "NoProvider";
        case Errc::AssessorFailure: return "AssessorFailure";
        case Errc::CursorCorrupt: return "CursorCorrupt";
        case Errc::NoCursor: return "NoCursor";
        case Errc::InvalidOption: return "InvalidOption";
        case Errc::IoError: return "IoError";
    }
    return "Error";
}

} // namespace cogmem
