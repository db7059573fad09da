#include "cogmem/kref.hpp"

#include "cogmem/errors.hpp"

#include <algorithm>
#include <charconv>

namespace cogmem {

namespace {

constexpr std::string_view kScheme = "kref://";

bool token_char(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
           c == '.' || c == '_' || c == '-';
}

[[noreturn]] void malformed(std::string_view text, const std::string& why) {
    raise(Errc::MalformedKref, why + " in \"" + std::string(text) + "\"");
}

std::int64_t parse_pin(std::string_view text, std::string_view value) {
    if (value.empty()) malformed(text, "empty r value");
    std::int64_t pin = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), pin);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        malformed(text, "non-numeric r value");
    if (pin < 1) malformed(text, "r value must be >= 1");
    return pin;
}

} // namespace

bool is_valid_token(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), token_char);
}

Kref Kref::make(std::string project, std::vector<std::string> space_path,
                std::string item_name, std::string kind,
                std::optional<std::int64_t> revision_pin,
                std::optional<std::string> artifact_name) {
    Kref k;
    k.project = std::move(project);
    k.space_path = std::move(space_path);
    k.item_name = std::move(item_name);
    k.kind = std::move(kind);
    k.revision_pin = revision_pin;
    k.artifact_name = std::move(artifact_name);

    if (!is_valid_token(k.project)) raise(Errc::MalformedKref, "bad project token");
    if (k.space_path.empty()) raise(Errc::MalformedKref, "space path must have >= 1 segment");
    if (k.space_path.size() > kMaxSpaceDepth)
        raise(Errc::MalformedKref, "space path deeper than 8 segments");
    for (const auto& seg : k.space_path)
        if (!is_valid_token(seg)) raise(Errc::MalformedKref, "bad space segment");
    if (!is_valid_token(k.item_name)) raise(Errc::MalformedKref, "bad item name");
    if (!is_valid_token(k.kind) || k.kind.find('.') != std::string::npos)
        raise(Errc::MalformedKref, "bad kind token");
    if (k.revision_pin && *k.revision_pin < 1)
        raise(Errc::MalformedKref, "revision pin must be >= 1");
    if (k.artifact_name && !is_valid_token(*k.artifact_name))
        raise(Errc::MalformedKref, "bad artifact token");
    return k;
}

Kref Kref::base() const {
    Kref k = *this;
    k.revision_pin.reset();
    k.artifact_name.reset();
    return k;
}

Kref Kref::with_pin(std::int64_t seq) const {
    Kref k = base();
    k.revision_pin = seq;
    return k;
}

std::string Kref::format() const {
    std::string out(kScheme);
    out += project;
    for (const auto& seg : space_path) {
        out += '/';
        out += seg;
    }
    out += '/';
    out += item_name;
    out += '.';
    out += kind;
    if (revision_pin) {
        out += "?r=";
        out += std::to_string(*revision_pin);
    }
    if (artifact_name) {
        out += revision_pin ? '&' : '?';
        out += "a=";
        out += *artifact_name;
    }
    return out;
}

bool operator==(const Kref& a, const Kref& b) {
    return a.project == b.project && a.space_path == b.space_path &&
           a.item_name == b.item_name && a.kind == b.kind &&
           a.revision_pin == b.revision_pin && a.artifact_name == b.artifact_name;
}

bool operator<(const Kref& a, const Kref& b) {
    auto key = [](const Kref& k) {
        return std::tie(k.project, k.space_path, k.item_name, k.kind, k.revision_pin,
                        k.artifact_name);
    };
    return key(a) < key(b);
}

Kref parse_kref(std::string_view text) {
    if (text.substr(0, kScheme.size()) != kScheme) malformed(text, "missing kref:// scheme");
    std::string_view rest = text.substr(kScheme.size());

    std::string_view path = rest;
    std::string_view query;
    if (auto q = rest.find('?'); q != std::string_view::npos) {
        path = rest.substr(0, q);
        query = rest.substr(q + 1);
        if (query.empty()) malformed(text, "empty query");
    }

    // Split the path on '/'.
    std::vector<std::string_view> segments;
    std::size_t start = 0;
    while (true) {
        auto slash = path.find('/', start);
        if (slash == std::string_view::npos) {
            segments.push_back(path.substr(start));
            break;
        }
        segments.push_back(path.substr(start, slash - start));
        start = slash + 1;
    }
    if (segments.size() < 3) malformed(text, "need project, space and item segments");
    for (auto seg : segments)
        if (!is_valid_token(seg)) malformed(text, "empty or invalid path segment");

    std::string_view last = segments.back();
    auto dot = last.rfind('.');
    if (dot == std::string_view::npos) malformed(text, "missing kind suffix");
    std::string_view item = last.substr(0, dot);
    std::string_view kind = last.substr(dot + 1);
    if (item.empty()) malformed(text, "empty item name");
    if (kind.empty()) malformed(text, "missing kind suffix");

    std::optional<std::int64_t> pin;
    std::optional<std::string> artifact;
    if (!query.empty()) {
        std::size_t qpos = 0;
        while (true) {
            auto amp = query.find('&', qpos);
            std::string_view pair =
                amp == std::string_view::npos ? query.substr(qpos) : query.substr(qpos, amp - qpos);
            auto eq = pair.find('=');
            if (eq == std::string_view::npos) malformed(text, "query parameter without '='");
            std::string_view key = pair.substr(0, eq);
            std::string_view value = pair.substr(eq + 1);
            if (key == "r") {
                if (pin) malformed(text, "duplicate r parameter");
                pin = parse_pin(text, value);
            } else if (key == "a") {
                if (artifact) malformed(text, "duplicate a parameter");
                if (!is_valid_token(value)) malformed(text, "bad artifact token");
                artifact = std::string(value);
            } else {
                malformed(text, "unknown query key \"" + std::string(key) + "\"");
            }
            if (amp == std::string_view::npos) break;
            qpos = amp + 1;
        }
    }

    std::vector<std::string> spaces;
    for (std::size_t i = 1; i + 1 < segments.size(); ++i) spaces.emplace_back(segments[i]);

    return Kref::make(std::string(segments.front()), std::move(spaces), std::string(item),
                      std::string(kind), pin, std::move(artifact));
}

} // namespace cogmem
