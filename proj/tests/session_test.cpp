#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cogmem/session.hpp"

using namespace cogmem;

namespace {

struct Fixture {
    std::shared_ptr<LogicalClock> clock = std::make_shared<LogicalClock>(1'000'000);
    SessionStore store{clock};
    SessionId sid{"personal", "u1hash", "20260203", 1};

    SessionMessage msg(const std::string& text, const std::string& role = "user") {
        return {role, text, {}};
    }
};

} // namespace

TEST_CASE("session id renders and parses as context:user:date:seq") {
    SessionId sid{"work", "abc123", "20260204", 7};
    CHECK(sid.format() == "work:abc123:20260204:7");
    CHECK(SessionId::parse("work:abc123:20260204:7") == sid);
    CHECK_THROWS_AS(SessionId::parse("work:abc123:2026:7"), Error);
    CHECK_THROWS_AS(SessionId::parse("work:abc123:20260204:0"), Error);
    CHECK_THROWS_AS(SessionId::parse("missing-parts"), Error);
}

TEST_CASE("key namespace follows the cogmem convention") {
    SessionId sid{"personal", "u1", "20260101", 2};
    CHECK(session_messages_key("proj", sid) ==
          "cogmem:proj:sessions:personal:u1:20260101:2:messages");
    CHECK(session_metadata_key("proj", sid) ==
          "cogmem:proj:sessions:personal:u1:20260101:2:metadata");
    CHECK(consolidation_queue_key("proj") == "cogmem:proj:consol_queue");
}

TEST_CASE("append grows the buffer and returns the new length") {
    Fixture f;
    CHECK(f.store.append("p", f.sid, f.msg("hello")) == 1);
    CHECK(f.store.append("p", f.sid, f.msg("world")) == 2);
    auto msgs = f.store.get("p", f.sid);
    REQUIRE(msgs.size() == 2);
    CHECK(msgs[0].text == "hello");
    CHECK(msgs[1].text == "world");
}

TEST_CASE("the 51st message evicts the first (FIFO at default capacity)") {
    Fixture f;
    for (int i = 0; i < 51; ++i)
        f.store.append("p", f.sid, f.msg("m" + std::to_string(i)));
    auto msgs = f.store.get("p", f.sid);
    REQUIRE(msgs.size() == kSessionCapacity);
    CHECK(msgs.front().text == "m1");
    CHECK(msgs.back().text == "m50");
}

TEST_CASE("contexts with the same user and date are isolated") {
    Fixture f;
    SessionId personal{"personal", "u1", "20260203", 1};
    SessionId work{"work", "u1", "20260203", 1};
    f.store.append("p", personal, f.msg("private note"));
    CHECK(f.store.get("p", work).empty());
    f.store.append("p", work, f.msg("work note"));
    CHECK(f.store.get("p", personal).size() == 1);
    CHECK(f.store.get("p", work).size() == 1);
    f.store.clear("p", personal);
    CHECK(f.store.get("p", personal).empty());
    CHECK(f.store.get("p", work).size() == 1);
}

TEST_CASE("projects are isolated too") {
    Fixture f;
    f.store.append("alpha", f.sid, f.msg("alpha data"));
    CHECK(f.store.get("beta", f.sid).empty());
}

TEST_CASE("buffers expire a TTL after the last write") {
    Fixture f;
    f.store.append("p", f.sid, f.msg("soon gone"));
    f.clock->advance(kSessionTtlMs - 10);
    CHECK(f.store.get("p", f.sid).size() == 1);
    f.clock->advance(20);
    CHECK(f.store.get("p", f.sid).empty());
    CHECK(f.store.metadata("p", f.sid).empty());
}

TEST_CASE("reads do not extend the TTL") {
    Fixture f;
    f.store.append("p", f.sid, f.msg("first"));
    // Keep reading right up to the deadline; the expiry must still fire
    // relative to the last write.
    for (int i = 0; i < 10; ++i) {
        f.clock->advance(kSessionTtlMs / 10 - 5);
        f.store.get("p", f.sid);
    }
    f.clock->advance(100);
    CHECK(f.store.get("p", f.sid).empty());
}

TEST_CASE("writes refresh the TTL") {
    Fixture f;
    f.store.append("p", f.sid, f.msg("first"));
    f.clock->advance(kSessionTtlMs - 100);
    f.store.append("p", f.sid, f.msg("second"));
    f.clock->advance(kSessionTtlMs - 100);
    CHECK(f.store.get("p", f.sid).size() == 2);
}

TEST_CASE("clear removes the buffer and is a no-op when absent") {
    Fixture f;
    f.store.append("p", f.sid, f.msg("x"));
    f.store.clear("p", f.sid);
    CHECK(f.store.get("p", f.sid).empty());
    CHECK_NOTHROW(f.store.clear("p", f.sid));
}

TEST_CASE("metadata reports created_at and message_count") {
    Fixture f;
    Timestamp creation = f.clock->peek();
    f.store.append("p", f.sid, f.msg("one"));
    f.store.append("p", f.sid, f.msg("two"));
    auto md = f.store.metadata("p", f.sid);
    CHECK(md.at("created_at") == std::to_string(creation.ms));
    CHECK(md.at("message_count") == "2");
}

TEST_CASE("capacity invariant holds under arbitrary operation sequences") {
    Fixture f;
    std::vector<SessionId> sids;
    for (int i = 1; i <= 4; ++i) sids.push_back({"ctx", "user", "20260101", i});
    for (int step = 0; step < 400; ++step) {
        const SessionId& sid = sids[static_cast<std::size_t>(step) % sids.size()];
        if (step % 97 == 0) f.store.clear("p", sid);
        std::size_t len = f.store.append("p", sid, f.msg("m" + std::to_string(step)));
        CHECK(len <= kSessionCapacity);
    }
    for (const SessionId& sid : sids) CHECK(f.store.get("p", sid).size() <= kSessionCapacity);
}

TEST_CASE("consolidation queue is a per-project FIFO of session ids") {
    Fixture f;
    SessionId a{"ctx", "u", "20260101", 1};
    SessionId b{"ctx", "u", "20260101", 2};
    f.store.enqueue_consolidation("p", a);
    f.store.enqueue_consolidation("p", b);
    CHECK(f.store.dequeue_consolidation("p") == a.format());
    CHECK(f.store.dequeue_consolidation("p") == b.format());
    CHECK_FALSE(f.store.dequeue_consolidation("p").has_value());
    CHECK_FALSE(f.store.dequeue_consolidation("other").has_value());
}

TEST_CASE("purge_expired drops only stale buffers") {
    Fixture f;
    SessionId fresh{"ctx", "u", "20260101", 1};
    SessionId stale{"ctx", "u", "20260101", 2};
    f.store.append("p", stale, f.msg("old"));
    f.clock->advance(kSessionTtlMs + 1);
    f.store.append("p", fresh, f.msg("new"));
    f.store.purge_expired();
    CHECK(f.store.get("p", fresh).size() == 1);
    CHECK(f.store.get("p", stale).empty());
}
