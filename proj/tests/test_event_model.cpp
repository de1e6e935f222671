#include <doctest.h>

#include "support/test_support.hpp"
#include "xct/event_model.hpp"

using namespace xct;
using namespace xct::test;

TEST_CASE("validate_event boundaries") {
  CHECK(validate_event(TransferEvent{t0(), FilePath{"/a"}, 0}) == "zero-byte transfer");
  CHECK_FALSE(validate_event(TransferEvent{t0(), FilePath{"/a"}, 1}));
  CHECK_FALSE(validate_event(ReadEvent{t0(), session("t"), FilePath{"/a"}, {0, 0}}));
  CHECK(validate_event(ReadVEvent{t0(), session("t"), FilePath{"/a"}, {}}) == "empty chunk sequence");
  CHECK_FALSE(validate_event(ReadVEvent{t0(), session("t"), std::nullopt, {{1, 2}}}));
  CHECK(validate_event(OpenEvent{t0(), session("t"), FilePath{""}}) == "empty path");
  CHECK(validate_event(OpenEvent{t0(), SessionKey{"", "u"}, FilePath{"/a"}}).has_value());
}

TEST_CASE("kind, timestamp and path accessors") {
  const TraceEvent r = read_at(at(1), "/x");
  CHECK(kind_of(r) == EventKind::read);
  CHECK(timestamp_of(r) == at(1));
  REQUIRE(path_of(r));
  CHECK(path_of(r)->value == "/x");

  const TraceEvent v = ReadVEvent{at(2), session("t"), std::nullopt, {{1, 0}}};
  CHECK(kind_of(v) == EventKind::readv);
  CHECK(path_of(v) == nullptr);

  for (auto k : kAllEventKinds) CHECK(!to_string(k).empty());
  CHECK(to_string(EventKind::transfer) == "transfer");
}

TEST_CASE("calendar helpers") {
  const Day d = make_day(2021, 8, 31);
  CHECK(format_day(d) == "2021-08-31");
  CHECK(parse_day("2021-08-31") == d);
  CHECK(parse_day("20210831") == d);
  CHECK_FALSE(parse_day("2021-02-30"));
  CHECK_FALSE(parse_day("2021/08/31"));
  CHECK(day_of(make_timestamp(2021, 8, 31, 23, 59, 59)) == d);

  const DayRange r{make_day(2021, 8, 1), make_day(2021, 8, 31)};
  CHECK(r.days() == 31);
  CHECK(r.end() == make_timestamp(2021, 8, 31, 23, 59, 59));
  const TimeRange tr{r.begin(), r.end()};
  CHECK(tr.contains(r.begin()));
  CHECK(tr.contains(r.end()));
  CHECK_FALSE(tr.contains(r.end() + Duration{1}));
}

TEST_CASE("paths and sessions compare byte-wise") {
  CHECK(FilePath{"/A"} < FilePath{"/a"});
  CHECK(SessionKey{"t1", "u1"} != SessionKey{"t1", "u2"});
  CHECK(std::hash<FilePath>{}(FilePath{"/a"}) == std::hash<FilePath>{}(FilePath{"/a"}));
}
