#ifndef HAWKESNET_ERRORS_HPP
#define HAWKESNET_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hawkesnet {

struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// dynet
struct duplicate_edge_error : error { using error::error; };
struct unknown_endpoint_error : error { using error::error; };
struct non_monotone_time_error : error { using error::error; };
struct unknown_statistic_error : error { using error::error; };
struct empty_network_error : error { using error::error; };
struct unsorted_events_error : error { using error::error; };

// kernel / process
struct event_after_horizon_error : error { using error::error; };
struct unstable_process_error : error { using error::error; };
struct non_integrable_kernel_error : error { using error::error; };

// markmodel
struct missing_community_error : error { using error::error; };
struct missing_position_error : error { using error::error; };
struct invalid_mark_error : error { using error::error; };

// estimate
struct zero_intensity_error : error { using error::error; };
struct nonfinite_likelihood_error : error { using error::error; };
struct singular_hessian_error : error { using error::error; };

// gof
struct too_few_samples_error : error { using error::error; };
struct bootstrap_failure_error : error { using error::error; };

// ingest / cli
struct parse_error : error {
    parse_error(const std::string& what, long line_no)
        : error(what + " (line " + std::to_string(line_no) + ")"), line(line_no) {}
    long line;
};
struct empty_input_error : error { using error::error; };
struct config_error : error { using error::error; };

} // namespace hawkesnet

#endif
