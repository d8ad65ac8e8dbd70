#include <doctest.h>

#include "passprob/ingest.hpp"

using namespace passprob;

namespace {

TrackingFrame frame(int index, double ball_x, const std::string& event = "") {
    TrackingFrame f;
    f.frame_index = index;
    f.event = event;
    Entity ball;
    ball.id = 0;
    ball.side = TeamSide::Ball;
    ball.x = ball_x;
    ball.y = 25.0;
    f.entities.push_back(ball);
    return f;
}

Entity player(EntityId id, double x, double y, TeamSide side = TeamSide::Offense) {
    Entity e;
    e.id = id;
    e.side = side;
    e.x = x;
    e.y = y;
    return e;
}

}  // namespace

TEST_CASE("flip_point is the left-direction normalization and an involution") {
    geom::Point2 p{30, 10};
    geom::Point2 q = ingest::flip_point(p);
    CHECK(q.x == doctest::Approx(90.0));
    CHECK(q.y == doctest::Approx(43.3));
    geom::Point2 r = ingest::flip_point(q);
    CHECK(r.x == doctest::Approx(p.x));
    CHECK(r.y == doctest::Approx(p.y));
}

TEST_CASE("abbreviate_name") {
    CHECK(ingest::abbreviate_name("Julio Jones") == "J.Jones");
    CHECK(ingest::abbreviate_name("Matt Ryan") == "M.Ryan");
}

TEST_CASE("parse_target_name finds the receiver in a play description") {
    auto t = ingest::parse_target_name(
        "(14:02) M.Ryan pass short right to J.Jones pushed ob at ATL 30 for 10 yards");
    REQUIRE(t.has_value());
    CHECK(*t == "J.Jones");

    auto inc = ingest::parse_target_name("(2:11) D.Brees pass incomplete deep left to M.Thomas.");
    REQUIRE(inc.has_value());
    CHECK(*inc == "M.Thomas");

    CHECK_FALSE(ingest::parse_target_name("(1:00) A.Dalton pass incomplete short middle.")
                    .has_value());
}

TEST_CASE("parse_passer_name") {
    auto p = ingest::parse_passer_name("(14:02) M.Ryan pass short right to J.Jones for 10 yards");
    REQUIRE(p.has_value());
    CHECK(*p == "M.Ryan");
}

TEST_CASE("names_match tolerates roster spelling differences") {
    CHECK(ingest::names_match("J.Jones", "Julio Jones"));
    CHECK_FALSE(ingest::names_match("J.Jones", "Julio Smith"));
    CHECK_FALSE(ingest::names_match("T.Jones", "Julio Jones"));
}

TEST_CASE("filter_reason covers the exclusion rules") {
    using namespace ingest;
    CHECK(filter_reason("S", "", "SHOTGUN", "sacked for -7 yards") == reason::kSack);
    CHECK(filter_reason("I", "OPI", "SHOTGUN", "pass incomplete") == reason::kPenalty);
    CHECK(filter_reason("I", "", "SHOTGUN", "A.Rodgers spiked the ball") == reason::kSpike);
    CHECK(filter_reason("I", "", "SHOTGUN", "B.Mayfield threw away the ball") ==
          reason::kThrowaway);
    CHECK(filter_reason("C", "", "", "clean pass to A.Receiver") == reason::kMissingFormation);
    CHECK_FALSE(filter_reason("C", "", "SHOTGUN", "M.Ryan pass short to J.Jones for 9 yards")
                    .has_value());
}

TEST_CASE("window_pass_frames trims leading backward-ball frames") {
    // ball x after the pass-forward event: 40.0, 39.8, 40.2, 41.0
    std::vector<TrackingFrame> frames;
    frames.push_back(frame(10, 40.0, "pass_forward"));
    frames.push_back(frame(11, 40.0));
    frames.push_back(frame(12, 39.8));
    frames.push_back(frame(13, 40.2));
    frames.push_back(frame(14, 41.0));
    frames.push_back(frame(15, 41.5, "pass_outcome_caught"));
    auto w = ingest::window_pass_frames(frames);
    REQUIRE(w.error.empty());
    CHECK(w.first == 13);  // the frame at x = 40.2
    CHECK(w.last == 14);
}

TEST_CASE("window_pass_frames single-frame window") {
    std::vector<TrackingFrame> frames;
    frames.push_back(frame(5, 30.0, "pass_forward"));
    frames.push_back(frame(6, 30.6));
    frames.push_back(frame(7, 31.0, "pass_outcome_incomplete"));
    auto w = ingest::window_pass_frames(frames);
    REQUIRE(w.error.empty());
    CHECK(w.first == 6);
    CHECK(w.last == 6);
}

TEST_CASE("window_pass_frames reports missing events and empty windows") {
    std::vector<TrackingFrame> no_pass{frame(1, 30.0), frame(2, 31.0, "pass_outcome_caught")};
    CHECK(ingest::window_pass_frames(no_pass).error == ingest::reason::kNoPassForward);

    std::vector<TrackingFrame> no_outcome{frame(1, 30.0, "pass_forward"), frame(2, 31.0)};
    CHECK(ingest::window_pass_frames(no_outcome).error == ingest::reason::kNoOutcome);

    std::vector<TrackingFrame> empty{frame(1, 30.0, "pass_forward"),
                                     frame(2, 29.0),
                                     frame(3, 28.5, "pass_outcome_incomplete")};
    CHECK(ingest::window_pass_frames(empty).error == ingest::reason::kEmptyWindow);
}

TEST_CASE("resolve_target prefers the description, falls back to nearest receiver") {
    PlayRecord rec;
    rec.candidates = {101, 102};
    std::vector<TrackingFrame> frames;
    TrackingFrame f = frame(20, 50.0, "pass_outcome_incomplete");
    f.entities.push_back(player(101, 51.0, 25.5));  // 1.1-ish yards from the ball
    f.entities.back().display_name = "Alpha Adams";
    f.entities.push_back(player(102, 56.0, 25.0));  // 6 yards
    f.entities.back().display_name = "Bravo Brown";
    frames.push_back(f);

    rec.description = "pass incomplete short left to B.Brown.";
    auto named = ingest::resolve_target(rec, frames, 20);
    REQUIRE(named.has_value());
    CHECK(*named == 102);

    rec.description = "pass incomplete short left.";
    auto nearest = ingest::resolve_target(rec, frames, 20);
    REQUIRE(nearest.has_value());
    CHECK(*nearest == 101);
}

TEST_CASE("resolve_target single candidate") {
    PlayRecord rec;
    rec.candidates = {77};
    std::vector<TrackingFrame> frames;
    TrackingFrame f = frame(3, 40.0, "pass_outcome_caught");
    f.entities.push_back(player(77, 45.0, 20.0));
    frames.push_back(f);
    rec.description = "no name here.";
    auto id = ingest::resolve_target(rec, frames, 3);
    REQUIRE(id.has_value());
    CHECK(*id == 77);
}

TEST_CASE("ingest report round-trips through JSON") {
    ingest::IngestReport rep;
    rep.retained = 42;
    rep.rows_skipped = 3;
    rep.max_window_len = 19;
    rep.excluded[ingest::reason::kSack] = 7;
    rep.excluded[ingest::reason::kSpike] = 2;
    auto back = ingest::IngestReport::from_json(rep.to_json());
    CHECK(back.retained == 42);
    CHECK(back.rows_skipped == 3);
    CHECK(back.max_window_len == 19);
    CHECK(back.excluded.at(ingest::reason::kSack) == 7);
    CHECK(back.excluded.at(ingest::reason::kSpike) == 2);
}
