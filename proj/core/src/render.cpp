#include "passprob/render.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "passprob/csv.hpp"

namespace passprob::render {

namespace {

const char* side_name(TeamSide s) {
    switch (s) {
        case TeamSide::Offense: return "offense";
        case TeamSide::Defense: return "defense";
        case TeamSide::Ball: return "ball";
    }
    return "?";
}

// Fixed-precision text for annotations so output bytes are deterministic.
std::string fixed3(double v) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(3);
    os << v;
    return os.str();
}

}  // namespace

std::vector<OverlayRecord> overlay_frame(const TrackingFrame& frame,
                                         const completion::FrameCompletion& fc) {
    int predicted_jersey = -1;
    if (fc.predicted < fc.candidate_ids.size()) {
        if (const Entity* e = frame.find(fc.candidate_ids[fc.predicted]))
            predicted_jersey = e->jersey;
    }
    std::vector<OverlayRecord> rows;
    rows.reserve(frame.entities.size());
    for (const Entity& e : frame.entities) {
        OverlayRecord r;
        r.frame_index = frame.frame_index;
        r.entity_id = e.id;
        r.display_name = e.display_name;
        r.jersey = e.jersey;
        r.side = e.side;
        r.x = e.x;
        r.y = e.y;
        r.p_complete = fc.p_complete;
        r.predicted_jersey = predicted_jersey;
        r.p_complete_given_predicted = fc.p_complete_given_predicted;
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_overlay_csv(std::ostream& out, const std::vector<OverlayRecord>& rows) {
    out << "frame_index,entity_id,display_name,jersey,side,x,y,p_complete,"
           "predicted_jersey,p_complete_given_predicted\n";
    for (const auto& r : rows) {
        out << r.frame_index << ',' << r.entity_id << ',' << csv::quote(r.display_name) << ','
            << r.jersey << ',' << side_name(r.side) << ',' << csv::fmt(r.x) << ','
            << csv::fmt(r.y) << ',' << csv::fmt(r.p_complete) << ',' << r.predicted_jersey << ','
            << csv::fmt(r.p_complete_given_predicted) << '\n';
    }
}

std::string frame_svg(const TrackingFrame& frame, const completion::FrameCompletion& fc) {
    // 8 px per yard plus a text band at the bottom.
    constexpr double kScale = 8.0;
    const int width = static_cast<int>(kFieldLengthYd * kScale);
    const int field_h = static_cast<int>(std::lround(kFieldWidthYd * kScale));
    const int height = field_h + 40;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << field_h
        << "\" fill=\"#2e7d32\"/>\n";
    // yard lines every 10 yards, goal lines included
    for (int yd = 10; yd <= 110; yd += 10) {
        const double px = yd * kScale;
        svg << "<line x1=\"" << fixed3(px) << "\" y1=\"0\" x2=\"" << fixed3(px) << "\" y2=\""
            << field_h << "\" stroke=\"#ffffff\" stroke-width=\"1\"/>\n";
    }

    auto cx = [&](double x) { return fixed3(x * kScale); };
    auto cy = [&](double y) { return fixed3((kFieldWidthYd - y) * kScale); };

    for (const Entity& e : frame.entities) {
        if (e.side == TeamSide::Ball) {
            svg << "<circle cx=\"" << cx(e.x) << "\" cy=\"" << cy(e.y)
                << "\" r=\"4\" fill=\"#8d6e63\"/>\n";  // the ball, in brown
            continue;
        }
        const char* fill = e.side == TeamSide::Offense ? "#1565c0" : "#c62828";
        svg << "<circle cx=\"" << cx(e.x) << "\" cy=\"" << cy(e.y) << "\" r=\"6\" fill=\"" << fill
            << "\"/>\n";
        if (e.jersey >= 0) {
            svg << "<text x=\"" << cx(e.x) << "\" y=\"" << cy(e.y)
                << "\" dy=\"3\" text-anchor=\"middle\" font-size=\"8\" fill=\"#ffffff\">"
                << e.jersey << "</text>\n";
        }
    }

    svg << "<text x=\"8\" y=\"" << (field_h + 16) << "\" font-size=\"13\" fill=\"#000000\">"
        << "frame " << frame.frame_index << "  P(C)=" << fixed3(fc.p_complete)
        << "  predicted #";
    if (fc.predicted < fc.candidate_ids.size()) {
        if (const Entity* e = frame.find(fc.candidate_ids[fc.predicted])) svg << e->jersey;
        else svg << '?';
    } else {
        svg << '?';
    }
    svg << "  P(C|pred)=" << fixed3(fc.p_complete_given_predicted) << "</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace passprob::render
