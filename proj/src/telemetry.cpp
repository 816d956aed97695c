#include "vgrl/telemetry.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <memory>
#include <ostream>
#include <vector>

namespace vgrl {

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
        text.remove_suffix(1);
    }
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw ConfigError("not a number: '" + std::string(text) + "'");
    }
    return value;
}

std::string telemetry_header(int z_dim, int m, int N) {
    std::string h = "t";
    for (int i = 1; i <= z_dim; ++i) h += ",z" + std::to_string(i);
    for (int i = 1; i <= m; ++i) h += ",u" + std::to_string(i);
    for (int i = 1; i <= N; ++i) h += ",W" + std::to_string(i);
    h += ",e_hjb,g1,xi,sigma,V_hat";
    return h;
}

CsvTelemetryWriter::CsvTelemetryWriter(std::ostream& out, int z_dim, int m, int N)
    : out_(out), z_dim_(z_dim), m_(m), N_(N) {
    out_ << telemetry_header(z_dim, m, N) << '\n';
}

void CsvTelemetryWriter::write(const TelemetryRecord& rec) {
    if (rec.z.size() != z_dim_ || rec.u_applied.size() != m_ || rec.W_hat.size() != N_) {
        throw ConfigError("telemetry record does not match the CSV header");
    }
    line_.clear();
    const auto put = [&](double x) {
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof buf, x);
        line_.append(buf, res.ptr);
        line_ += ',';
    };
    put(rec.t);
    for (Eigen::Index i = 0; i < rec.z.size(); ++i) put(rec.z(i));
    for (Eigen::Index i = 0; i < rec.u_applied.size(); ++i) put(rec.u_applied(i));
    for (Eigen::Index i = 0; i < rec.W_hat.size(); ++i) put(rec.W_hat(i));
    put(rec.e_hjb);
    put(rec.g1);
    line_ += std::to_string(rec.xi);
    line_ += ',';
    put(rec.sigma);
    put(rec.V_hat);
    line_.back() = '\n';
    out_.write(line_.data(), static_cast<std::streamsize>(line_.size()));
}

TelemetrySink CsvTelemetryWriter::sink() {
    return [this](const TelemetryRecord& rec) { write(rec); };
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

int count_prefixed(const std::vector<std::string_view>& cols, std::size_t& pos, char prefix) {
    int k = 0;
    while (pos < cols.size() && cols[pos] == std::string(1, prefix) + std::to_string(k + 1)) {
        ++k;
        ++pos;
    }
    return k;
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

class RowReader {
public:
    RowReader(std::istream& in) : in_(in) {
        std::string line;
        if (!std::getline(in_, line)) throw ConfigError("telemetry CSV is empty");
        strip_cr(line);
        cols_ = parse_telemetry_header(line);
    }

    const TelemetryColumns& columns() const { return cols_; }

    bool next(TelemetryRecord& rec) {
        std::string line;
        for (;;) {
            if (!std::getline(in_, line)) return false;
            ++line_no_;
            strip_cr(line);
            if (!line.empty()) break;
        }
        const auto f = split(line);
        const std::size_t expected = 1 + cols_.z_dim + cols_.m + cols_.N + 5;
        if (f.size() != expected) {
            throw ConfigError("telemetry row " + std::to_string(line_no_) + " has " +
                              std::to_string(f.size()) + " fields, expected " +
                              std::to_string(expected));
        }
        std::size_t p = 0;
        rec.t = parse_double(f[p++]);
        rec.z.resize(cols_.z_dim);
        for (int i = 0; i < cols_.z_dim; ++i) rec.z(i) = parse_double(f[p++]);
        rec.u_applied.resize(cols_.m);
        for (int i = 0; i < cols_.m; ++i) rec.u_applied(i) = parse_double(f[p++]);
        rec.W_hat.resize(cols_.N);
        for (int i = 0; i < cols_.N; ++i) rec.W_hat(i) = parse_double(f[p++]);
        rec.e_hjb = parse_double(f[p++]);
        rec.g1 = parse_double(f[p++]);
        rec.xi = static_cast<int>(parse_double(f[p++]));
        rec.sigma = parse_double(f[p++]);
        rec.V_hat = parse_double(f[p++]);
        return true;
    }

private:
    std::istream& in_;
    TelemetryColumns cols_;
    long line_no_ = 1;
};

}  // namespace

TelemetryColumns parse_telemetry_header(std::string_view line) {
    const auto cols = split(line);
    std::size_t pos = 0;
    if (cols.empty() || cols[pos] != "t") throw ConfigError("telemetry header must start with t");
    ++pos;
    TelemetryColumns c;
    c.z_dim = count_prefixed(cols, pos, 'z');
    c.m = count_prefixed(cols, pos, 'u');
    c.N = count_prefixed(cols, pos, 'W');
    if (c.z_dim == 0 || c.m == 0 || c.N == 0) {
        throw ConfigError("telemetry header lacks z, u or W columns");
    }
    if (std::string(line) != telemetry_header(c.z_dim, c.m, c.N)) {
        throw ConfigError("unrecognised telemetry header");
    }
    return c;
}

Trajectory read_telemetry(std::istream& in) {
    RowReader reader(in);
    Trajectory out;
    TelemetryRecord rec;
    while (reader.next(rec)) out.push_back(rec);
    return out;
}

TelemetryMetrics summarize_telemetry(std::istream& in, double convergence_window,
                                     double convergence_tol, double steady_window) {
    RowReader reader(in);
    TelemetryMetrics out;
    SteadyStateTracker steady(steady_window);
    std::unique_ptr<ConvergenceTracker> conv;
    TelemetryRecord first, rec;
    const int n = reader.columns().z_dim / 2;
    while (reader.next(rec)) {
        ++out.rows;
        out.max_abs_u = std::max(out.max_abs_u, rec.u_applied.cwiseAbs().maxCoeff());
        steady.push(rec.t, rec.z.head(n).squaredNorm());
        if (out.rows == 1) {
            first = rec;
            continue;
        }
        if (!conv) {
            const long offset = std::lround(convergence_window / (rec.t - first.t));
            if (offset < 1) throw ConfigError("convergence window shorter than the row spacing");
            conv = std::make_unique<ConvergenceTracker>(offset, convergence_tol);
            conv->push(first.t, first.W_hat);
        }
        conv->push(rec.t, rec.W_hat);
    }
    if (out.rows == 0) throw ConfigError("telemetry CSV has no rows");
    if (conv) out.convergence_time = conv->result();
    out.steady_state_rms = steady.result();
    return out;
}

}  // namespace vgrl
