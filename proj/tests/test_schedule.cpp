#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "error.hpp"
#include "rng.hpp"
#include "schedule.hpp"
#include "test_util.hpp"

using namespace aggsched;

TEST_CASE("schedule text round-trips") {
    Rng rng(9);
    Schedule s;
    for (int i = 0; i < 40; ++i)
        s.add({rng.next_int(1, 12), rng.next_int(0, 9), rng.next_int(0, 9), rng.next_int(1, 4), rng.next_int(1, 3)});
    Schedule back = Schedule::from_text(s.to_text());
    CHECK(back.slot_count() == s.slot_count());
    CHECK(back.all_entries() == s.all_entries());
    CHECK(back.to_text() == s.to_text());
}

TEST_CASE("fixture schedule file parses") {
    Schedule s = Schedule::from_file(test::fixture_path("demo8_8slot.sched"));
    CHECK(s.slot_count() == 8);
    CHECK(s.slots[0].size() == 3);
    CHECK(s.slots[7].size() == 1);
    CHECK(s.delivered_to(0) == 20);
    CHECK(s.slots[0][2] == ScheduleEntry{1, 1, 0, 3, 2});
}

TEST_CASE("malformed schedule lines are rejected") {
    auto rejects = [](const char* text) {
        try {
            static_cast<void>(Schedule::from_text(text));
            return false;
        } catch (const Error& e) {
            return e.code() == Errc::parse;
        }
    };
    CHECK(rejects("slot x: 1 -> 0 gamma=1 ch=1\n"));
    CHECK(rejects("slot 1 1 -> 0 gamma=1 ch=1\n"));
    CHECK(rejects("slot 1: 1 => 0 gamma=1 ch=1\n"));
    CHECK(rejects("slot 1: 1 -> 0 gamma=1\n"));
    CHECK(rejects("slot 0: 1 -> 0 gamma=1 ch=1\n"));
    CHECK(rejects("slot 1: 1 -> 0 gamma=1 ch=1 extra\n"));
    CHECK(!rejects("# only a comment\n\n"));
}

TEST_CASE("entries land in their slot buckets") {
    Schedule s;
    s.add({3, 1, 0, 1, 1});
    s.add({1, 2, 0, 1, 1});
    CHECK(s.slot_count() == 3);
    CHECK(s.slots[0].size() == 1);
    CHECK(s.slots[1].empty());
    CHECK(s.slots[2].size() == 1);
}
