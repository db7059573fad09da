#include "cogmem/session.hpp"

#include <charconv>

namespace cogmem {

std::string SessionId::format() const {
    return context + ":" + user_hash + ":" + date + ":" + std::to_string(seq);
}

SessionId SessionId::parse(const std::string& text) {
    SessionId sid;
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        auto colon = text.find(':', start);
        if (colon == std::string::npos) {
            parts.push_back(text.substr(start));
            break;
        }
        parts.push_back(text.substr(start, colon - start));
        start = colon + 1;
    }
    if (parts.size() != 4 || parts[0].empty() || parts[1].empty() || parts[2].size() != 8)
        raise(Errc::InvalidOption, "session id must be context:user_hash:YYYYMMDD:seq");
    sid.context = parts[0];
    sid.user_hash = parts[1];
    sid.date = parts[2];
    auto [ptr, ec] = std::from_chars(parts[3].data(), parts[3].data() + parts[3].size(), sid.seq);
    if (ec != std::errc{} || ptr != parts[3].data() + parts[3].size() || sid.seq < 1)
        raise(Errc::InvalidOption, "session seq must be a positive integer");
    return sid;
}

std::string session_messages_key(const std::string& project, const SessionId& sid) {
    return "cogmem:" + project + ":sessions:" + sid.format() + ":messages";
}

std::string session_metadata_key(const std::string& project, const SessionId& sid) {
    return "cogmem:" + project + ":sessions:" + sid.format() + ":metadata";
}

std::string consolidation_queue_key(const std::string& project) {
    return "cogmem:" + project + ":consol_queue";
}

SessionStore::SessionStore(std::shared_ptr<Clock> clock, std::size_t capacity,
                           std::int64_t ttl_ms)
    : clock_(std::move(clock)), capacity_(capacity), ttl_ms_(ttl_ms) {}

std::size_t SessionStore::append(const std::string& project, const SessionId& sid,
                                 SessionMessage message) {
    std::lock_guard lock(mx_);
    Timestamp now = clock_->now();
    std::string key = session_messages_key(project, sid);
    auto it = buffers_.find(key);
    if (it != buffers_.end() && expired(it->second, now)) {
        buffers_.erase(it);
        it = buffers_.end();
    }
    if (it == buffers_.end()) {
        Buffer b;
        b.created_at = now;
        b.last_touched = now;
        it = buffers_.emplace(key, std::move(b)).first;
    }
    Buffer& buf = it->second;
    if (message.at.ms == 0) message.at = now;
    buf.messages.push_back(std::move(message));
    while (buf.messages.size() > capacity_) buf.messages.pop_front();
    buf.last_touched = now;
    return buf.messages.size();
}

std::vector<SessionMessage> SessionStore::get(const std::string& project,
                                              const SessionId& sid) const {
    std::lock_guard lock(mx_);
    auto it = buffers_.find(session_messages_key(project, sid));
    if (it == buffers_.end()) return {};
    if (expired(it->second, clock_->now())) return {}; // reads do not extend the TTL
    return {it->second.messages.begin(), it->second.messages.end()};
}

void SessionStore::clear(const std::string& project, const SessionId& sid) {
    std::lock_guard lock(mx_);
    buffers_.erase(session_messages_key(project, sid));
}

std::map<std::string, std::string> SessionStore::metadata(const std::string& project,
                                                          const SessionId& sid) const {
    std::lock_guard lock(mx_);
    auto it = buffers_.find(session_messages_key(project, sid));
    if (it == buffers_.end() || expired(it->second, clock_->now())) return {};
    return {{"created_at", std::to_string(it->second.created_at.ms)},
            {"message_count", std::to_string(it->second.messages.size())}};
}

void SessionStore::enqueue_consolidation(const std::string& project, const SessionId& sid) {
    std::lock_guard lock(mx_);
    consol_queues_[consolidation_queue_key(project)].push_back(sid.format());
}

std::optional<std::string> SessionStore::dequeue_consolidation(const std::string& project) {
    std::lock_guard lock(mx_);
    auto it = consol_queues_.find(consolidation_queue_key(project));
    if (it == consol_queues_.end() || it->second.empty()) return std::nullopt;
    std::string sid = it->second.front();
    it->second.pop_front();
    return sid;
}

void SessionStore::purge_expired() {
    std::lock_guard lock(mx_);
    Timestamp now = clock_->now();
    for (auto it = buffers_.begin(); it != buffers_.end();) {
        if (expired(it->second, now))
            it = buffers_.erase(it);
        else
            ++it;
    }
}

} // namespace cogmem
