#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "vgrl/sim.hpp"

namespace vgrl {

// Shortest decimal text that parses back to the same double. Independent of
// the global locale.
std::string format_double(double x);
// Throws ConfigError unless the whole of `text` is one number.
double parse_double(std::string_view text);

// t,z1..z{z_dim},u1..u{m},W1..W{N},e_hjb,g1,xi,sigma,V_hat
std::string telemetry_header(int z_dim, int m, int N);

class CsvTelemetryWriter {
public:
    // Writes the header immediately.
    CsvTelemetryWriter(std::ostream& out, int z_dim, int m, int N);

    void write(const TelemetryRecord& rec);
    TelemetrySink sink();

private:
    std::ostream& out_;
    int z_dim_, m_, N_;
    std::string line_;
};

struct TelemetryColumns {
    int z_dim = 0;
    int m = 0;
    int N = 0;
};

// Parses and checks a header line produced by telemetry_header.
TelemetryColumns parse_telemetry_header(std::string_view line);

Trajectory read_telemetry(std::istream& in);

struct TelemetryMetrics {
    std::optional<double> convergence_time;
    double steady_state_rms = 0.0;
    double max_abs_u = 0.0;
    long rows = 0;
};

// Same metrics as run_episode, recomputed from emitted rows.
TelemetryMetrics summarize_telemetry(std::istream& in, double convergence_window,
                                     double convergence_tol, double steady_window);

}  // namespace vgrl
