#pragma once
// session: working-memory buffers. Bounded FIFO message queues keyed by
// cogmem:{project}:sessions:{sid}:messages, expiring a TTL after the last
// write (reads do not extend the TTL). Volatile by design; nothing here
// is persisted to the graph snapshot.

#include "cogmem/clock.hpp"
#include "cogmem/errors.hpp"

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace cogmem {

inline constexpr std::size_t kSessionCapacity = 50;
inline constexpr std::int64_t kSessionTtlMs = 60 * 60 * 1000; // 1 hour

// context:user_hash:date:seq — the context field is the namespace boundary.
struct SessionId {
    std::string context;
    std::string user_hash;
    std::string date; // YYYYMMDD
    std::int64_t seq = 1;

    std::string format() const;
    static SessionId parse(const std::string& text);

    friend bool operator==(const SessionId& a, const SessionId& b) {
        return a.context == b.context && a.user_hash == b.user_hash && a.date == b.date &&
               a.seq == b.seq;
    }
};

struct SessionMessage {
    std::string role;
    std::string text;
    Timestamp at;
};

std::string session_messages_key(const std::string& project, const SessionId& sid);
std::string session_metadata_key(const std::string& project, const SessionId& sid);
std::string consolidation_queue_key(const std::string& project);

class SessionStore {
public:
    explicit SessionStore(std::shared_ptr<Clock> clock, std::size_t capacity = kSessionCapacity,
                          std::int64_t ttl_ms = kSessionTtlMs);

    // Appends and returns the new length; evicts FIFO past capacity and
    // refreshes the TTL.
    std::size_t append(const std::string& project, const SessionId& sid, SessionMessage message);
    std::vector<SessionMessage> get(const std::string& project, const SessionId& sid) const;
    void clear(const std::string& project, const SessionId& sid);

    // {created_at, message_count}; empty when the buffer is absent/expired.
    std::map<std::string, std::string> metadata(const std::string& project,
                                                const SessionId& sid) const;

    void enqueue_consolidation(const std::string& project, const SessionId& sid);
    std::optional<std::string> dequeue_consolidation(const std::string& project);

    void purge_expired();

private:
    struct Buffer {
        std::deque<SessionMessage> messages;
        Timestamp created_at;
        Timestamp last_touched;
    };

    bool expired(const Buffer& b, Timestamp now) const {
        return now.ms >= b.last_touched.ms + ttl_ms_;
    }

    std::shared_ptr<Clock> clock_;
    std::size_t capacity_;
    std::int64_t ttl_ms_;
    std::map<std::string, Buffer> buffers_;             // full message key -> buffer
    std::map<std::string, std::deque<std::string>> consol_queues_; // queue key -> sids
    mutable std::mutex mx_;
};

} // namespace cogmem
