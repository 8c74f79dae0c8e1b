#ifndef HAWKESNET_INGEST_HPP
#define HAWKESNET_INGEST_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hawkesnet/dynet.hpp"

namespace hawkesnet {

// Line-oriented event-stream file:
//   #key=value            header (version, T, optional seed/spec provenance)
//   <time>\t<nodes>\t<edges>
// nodes: comma-separated integers or "-"; edges: comma-separated "u-v"
// with u < v, or "-". Times use 17 significant digits so write -> parse
// -> write round-trips are byte-identical.
struct event_stream {
    double T = 0.0;
    std::map<std::string, std::string> header; // extra keys as given
    std::vector<event_record> events;
};

void write_events(std::ostream& os, const event_stream& stream);
void write_events_file(const std::string& path, const event_stream& stream);

// Throws parse_error with the offending line number; replays the events
// afterwards so duplicate edges and unknown endpoints surface here.
event_stream parse_events(std::istream& is);
event_stream parse_events_file(const std::string& path);

// --- contact data ---------------------------------------------------------

struct contact_row {
    double time = 0.0;
    std::string i;
    std::string j;
};

struct contact_options {
    std::optional<double> rescale_T; // affine map onto (0, T]
    std::optional<double> horizon;   // explicit T when not rescaling
};

struct contact_result {
    event_stream stream;
    std::vector<std::string> dictionary; // node id -> raw identifier
    long dropped_repeats = 0;            // repeated pairs (model has no repeated edges)
    long dropped_self_loops = 0;
};

// First occurrences only: a node's first appearance becomes a node
// addition, a pair's first contact an edge addition; everything sharing
// one timestamp aggregates into a single event.
contact_result contacts_to_events(std::vector<contact_row> rows,
                                  const contact_options& opts = {});

// Whitespace-separated "t i j" rows; extra columns ignored, '#' comments
// and blank lines skipped.
std::vector<contact_row> parse_contact_rows(std::istream& is);
std::vector<contact_row> parse_contact_rows_file(const std::string& path);

void write_dictionary_file(const std::string& path, const std::vector<std::string>& dict);

} // namespace hawkesnet

#endif
