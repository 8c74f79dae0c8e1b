#include "hawkesnet/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "hawkesnet/kernel.hpp"

namespace hawkesnet {

namespace {

std::string format_time(double t) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", t);
    return buf;
}

double parse_double(const std::string& s, long line_no) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw parse_error("bad number '" + s + "'", line_no);
    }
}

long parse_int(const std::string& s, long line_no) {
    long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || v < 0)
        throw parse_error("bad node label '" + s + "'", line_no);
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string::npos ? pos : pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

} // namespace

void write_events(std::ostream& os, const event_stream& stream) {
    os << "#version=1\n";
    os << "#T=" << format_time(stream.T) << "\n";
    for (const auto& [key, value] : stream.header) {
        if (key == "version" || key == "T") continue;
        os << "#" << key << "=" << value << "\n";
    }
    for (const auto& ev : stream.events) {
        os << format_time(ev.time) << "\t";
        if (ev.m.new_nodes.empty()) {
            os << "-";
        } else {
            for (std::size_t i = 0; i < ev.m.new_nodes.size(); ++i)
                os << (i ? "," : "") << ev.m.new_nodes[i];
        }
        os << "\t";
        if (ev.m.new_edges.empty()) {
            os << "-";
        } else {
            for (std::size_t i = 0; i < ev.m.new_edges.size(); ++i)
                os << (i ? "," : "") << ev.m.new_edges[i].u << "-" << ev.m.new_edges[i].v;
        }
        os << "\n";
    }
}

void write_events_file(const std::string& path, const event_stream& stream) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw error("cannot open for writing: " + path);
    write_events(os, stream);
}

event_stream parse_events(std::istream& is) {
    event_stream out;
    bool saw_T = false;
    std::string line;
    long line_no = 0;
    double prev_time = -std::numeric_limits<double>::infinity();

    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::size_t eq = line.find('=');
            if (eq == std::string::npos)
                throw parse_error("header line lacks '='", line_no);
            const std::string key = line.substr(1, eq - 1);
            const std::string value = line.substr(eq + 1);
            out.header[key] = value;
            if (key == "T") {
                out.T = parse_double(value, line_no);
                saw_T = true;
            }
            continue;
        }
        const auto fields = split(line, '\t');
        if (fields.size() != 3)
            throw parse_error("expected <time>\\t<nodes>\\t<edges>", line_no);

        event_record ev;
        ev.time = parse_double(fields[0], line_no);
        if (ev.time <= prev_time || ev.time - prev_time < min_event_gap)
            throw non_monotone_time_error("event times not strictly increasing at line " +
                                          std::to_string(line_no));
        prev_time = ev.time;

        if (fields[1] != "-")
            for (const auto& tok : split(fields[1], ','))
                ev.m.new_nodes.push_back(static_cast<node_id>(parse_int(tok, line_no)));
        if (fields[2] != "-") {
            for (const auto& tok : split(fields[2], ',')) {
                const std::size_t dash = tok.find('-');
                if (dash == std::string::npos || dash == 0 || dash + 1 >= tok.size())
                    throw parse_error("bad edge '" + tok + "'", line_no);
                const long u = parse_int(tok.substr(0, dash), line_no);
                const long v = parse_int(tok.substr(dash + 1), line_no);
                if (u >= v) throw parse_error("edge must be u-v with u < v", line_no);
                ev.m.new_edges.emplace_back(static_cast<node_id>(u), static_cast<node_id>(v));
            }
        }
        out.events.push_back(std::move(ev));
    }

    if (!saw_T)
        out.T = out.events.empty() ? 0.0 : out.events.back().time;
    replay(out.events); // validates marks (duplicates, unknown endpoints)
    return out;
}

event_stream parse_events_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw error("cannot open: " + path);
    return parse_events(is);
}

// --- contact data -----------------------------------------------------------

std::vector<contact_row> parse_contact_rows(std::istream& is) {
    std::vector<contact_row> rows;
    std::string line;
    long line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        contact_row row;
        std::string t;
        if (!(ls >> t >> row.i >> row.j))
            throw parse_error("expected 't i j'", line_no);
        row.time = parse_double(t, line_no);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<contact_row> parse_contact_rows_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw error("cannot open: " + path);
    return parse_contact_rows(is);
}

contact_result contacts_to_events(std::vector<contact_row> rows, const contact_options& opts) {
    if (rows.empty()) throw empty_input_error("no contact rows");
    std::stable_sort(rows.begin(), rows.end(),
                     [](const contact_row& a, const contact_row& b) { return a.time < b.time; });

    contact_result out;
    std::unordered_map<std::string, node_id> ids;
    std::unordered_map<std::uint64_t, bool> pairs;
    auto pair_key = [](node_id u, node_id v) {
        return (static_cast<std::uint64_t>(std::min(u, v)) << 32) | std::max(u, v);
    };

    std::size_t at = 0;
    while (at < rows.size()) {
        const double t = rows[at].time;
        event_record ev;
        ev.time = t;
        for (; at < rows.size() && rows[at].time == t; ++at) {
            const contact_row& row = rows[at];
            if (row.i == row.j) {
                ++out.dropped_self_loops;
                continue;
            }
            auto intern = [&](const std::string& raw) {
                auto it = ids.find(raw);
                if (it != ids.end()) return std::make_pair(it->second, false);
                const node_id id = static_cast<node_id>(out.dictionary.size());
                ids.emplace(raw, id);
                out.dictionary.push_back(raw);
                return std::make_pair(id, true);
            };
            const auto [u, u_new] = intern(row.i);
            const auto [v, v_new] = intern(row.j);
            if (u_new) ev.m.new_nodes.push_back(u);
            if (v_new) ev.m.new_nodes.push_back(v);
            if (!pairs.emplace(pair_key(u, v), true).second) {
                ++out.dropped_repeats;
                continue;
            }
            ev.m.new_edges.emplace_back(u, v);
        }
        if (!ev.m.empty()) out.stream.events.push_back(std::move(ev));
    }
    if (out.stream.events.empty())
        throw empty_input_error("contact rows contained no usable updates");

    if (opts.rescale_T) {
        // Affine map onto (0, T]; the first event keeps one mean gap of
        // headroom above 0. Order and relative spacing are preserved.
        auto& evs = out.stream.events;
        const double t0 = evs.front().time;
        const double t1 = evs.back().time;
        const double pad =
            evs.size() > 1 ? (t1 - t0) / static_cast<double>(evs.size()) : 1.0;
        const double scale = *opts.rescale_T / (t1 - t0 + pad);
        for (auto& ev : evs) ev.time = (ev.time - t0 + pad) * scale;
        out.stream.T = *opts.rescale_T;
        out.stream.header["rescaled_from"] =
            format_time(t0) + ".." + format_time(t1);
    } else {
        out.stream.T = opts.horizon.value_or(out.stream.events.back().time);
    }
    return out;
}

void write_dictionary_file(const std::string& path, const std::vector<std::string>& dict) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw error("cannot open for writing: " + path);
    for (std::size_t i = 0; i < dict.size(); ++i) os << i << "\t" << dict[i] << "\n";
}

} // namespace hawkesnet
