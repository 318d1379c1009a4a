#include "projsub/trace_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace projsub {

std::string format_number(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    if (ec != std::errc()) throw Error("cannot format number");
    return {buf, ptr};
}

double parse_number(const std::string &text) {
    double v = 0.0;
    const char *first = text.data();
    const char *last = first + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || first == last) {
        throw Error("not a number: '" + text + "'");
    }
    return v;
}

namespace {

std::vector<std::string> split(const std::string &line) {
    std::vector<std::string> out;
    std::string cell;
    for (char c : line) {
        if (c == ',') {
            out.push_back(std::move(cell));
            cell.clear();
        } else if (c != '\r') {
            cell.push_back(c);
        }
    }
    out.push_back(std::move(cell));
    return out;
}

std::string optional_number(double v) { return std::isnan(v) ? std::string() : format_number(v); }

double parse_optional(const std::string &text) {
    return text.empty() ? std::numeric_limits<double>::quiet_NaN() : parse_number(text);
}

std::uint64_t parse_index(const std::string &text) {
    std::uint64_t v = 0;
    const char *first = text.data();
    const char *last = first + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || first == last) throw Error("bad iteration index '" + text + "'");
    return v;
}

struct Layout {
    std::size_t sets = 0;
    std::size_t dim = 0;
    std::size_t inner = 0;
};

Layout layout_of(const RunTrace &trace) {
    Layout l;
    l.sets = trace.terminal.residuals.size();
    l.dim = trace.terminal.x.size();
    l.inner = trace.has_inner() ? trace.records.front().inner.size() : 0;
    return l;
}

} // namespace

void write_trace_csv(std::ostream &out, const RunTrace &trace) {
    const Layout l = layout_of(trace);
    out << "k,lambda,f,residual_max";
    for (std::size_t i = 1; i <= l.sets; ++i) out << ",residual_" << i;
    out << ",step_norm";
    for (std::size_t d = 1; d <= l.dim; ++d) out << ",x_" << d;
    for (std::size_t j = 1; j <= l.inner; ++j) {
        for (std::size_t d = 1; d <= l.dim; ++d) out << ",inner_" << j << '_' << d;
    }
    out << '\n';

    for (const auto &rec : trace.records) {
        out << rec.k << ',' << format_number(rec.lambda) << ',' << optional_number(rec.f) << ','
            << format_number(rec.residual_max);
        for (double r : rec.residuals) out << ',' << format_number(r);
        out << ',' << format_number(rec.step_norm);
        for (double c : rec.x.coords()) out << ',' << format_number(c);
        if (rec.inner.size() != l.inner) throw Error("trace has a ragged inner record");
        for (const auto &p : rec.inner) {
            for (double c : p.coords()) out << ',' << format_number(c);
        }
        out << '\n';
    }

    const auto &t = trace.terminal;
    out << trace.records.size() << ",," << optional_number(t.f) << ',' << format_number(t.residual_max);
    for (double r : t.residuals) out << ',' << format_number(r);
    out << ',';
    for (double c : t.x.coords()) out << ',' << format_number(c);
    for (std::size_t i = 0; i < l.inner * l.dim; ++i) out << ',';
    out << '\n';
}

void write_trace_csv(const std::string &path, const RunTrace &trace) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    write_trace_csv(out, trace);
    if (!out) throw Error("failed writing '" + path + "'");
}

RunTrace read_trace_csv(std::istream &in) {
    std::string line;
    if (!std::getline(in, line)) throw Error("trace is empty");
    const auto header = split(line);
    Layout l;
    std::size_t pos = 0;
    auto expect = [&](const std::string &name) {
        if (pos >= header.size() || header[pos] != name) {
            throw Error("trace header: expected column '" + name + "' at position " + std::to_string(pos + 1));
        }
        ++pos;
    };
    expect("k");
    expect("lambda");
    expect("f");
    expect("residual_max");
    while (pos < header.size() && header[pos] == "residual_" + std::to_string(l.sets + 1)) {
        ++l.sets;
        ++pos;
    }
    expect("step_norm");
    while (pos < header.size() && header[pos] == "x_" + std::to_string(l.dim + 1)) {
        ++l.dim;
        ++pos;
    }
    if (l.dim == 0) throw Error("trace header has no iterate columns");
    while (pos < header.size()) {
        for (std::size_t d = 1; d <= l.dim; ++d) {
            expect("inner_" + std::to_string(l.inner + 1) + "_" + std::to_string(d));
        }
        ++l.inner;
    }

    RunTrace trace;
    trace.set_count = l.sets;
    bool terminal_seen = false;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        if (terminal_seen) throw Error("trace has rows after the terminal row");
        const auto cells = split(line);
        if (cells.size() != header.size()) {
            throw Error("trace line " + std::to_string(line_no) + ": expected " +
                        std::to_string(header.size()) + " fields, got " + std::to_string(cells.size()));
        }
        std::size_t c = 0;
        const std::uint64_t k = parse_index(cells[c++]);
        const std::string lambda_text = cells[c++];
        const double f = parse_optional(cells[c++]);
        const double rmax = parse_number(cells[c++]);
        std::vector<double> residuals;
        for (std::size_t i = 0; i < l.sets; ++i) residuals.push_back(parse_number(cells[c++]));
        const std::string step_text = cells[c++];
        std::vector<double> x;
        for (std::size_t d = 0; d < l.dim; ++d) x.push_back(parse_number(cells[c++]));

        if (lambda_text.empty()) {
            if (k != trace.records.size()) throw Error("terminal row index does not match row count");
            trace.terminal = {Vector(std::move(x)), f, std::move(residuals), rmax};
            terminal_seen = true;
            continue;
        }
        if (k != trace.records.size()) {
            throw Error("trace line " + std::to_string(line_no) + ": iteration index out of sequence");
        }
        IterationRecord rec;
        rec.k = k;
        rec.lambda = parse_number(lambda_text);
        rec.f = f;
        rec.residual_max = rmax;
        rec.residuals = std::move(residuals);
        rec.step_norm = parse_number(step_text);
        rec.x = Vector(std::move(x));
        for (std::size_t j = 0; j < l.inner; ++j) {
            std::vector<double> p;
            for (std::size_t d = 0; d < l.dim; ++d) p.push_back(parse_number(cells[c++]));
            rec.inner.emplace_back(std::move(p));
        }
        trace.records.push_back(std::move(rec));
    }
    if (!terminal_seen) throw Error("trace has no terminal row");
    return trace;
}

RunTrace read_trace_csv(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open trace '" + path + "'");
    return read_trace_csv(in);
}

RunSummary summarize(const RunTrace &trace, const std::string &problem) {
    RunSummary s;
    s.method = to_string(trace.method);
    s.problem = problem;
    s.seed = trace.seed;
    s.iterations = trace.iterations();
    s.status = to_string(trace.status);
    s.abort_reason = trace.abort_reason;
    if (std::isfinite(trace.terminal.f)) s.final_f = trace.terminal.f;
    s.best_f = trace.best_f;
    s.final_residual = trace.terminal.residual_max;
    s.wall_seconds = trace.wall_seconds;
    s.schedule = trace.schedule;
    return s;
}

nlohmann::ordered_json to_json(const RunSummary &s) {
    nlohmann::ordered_json j;
    j["method"] = s.method;
    j["problem"] = s.problem;
    j["seed"] = s.seed;
    j["schedule"] = s.schedule;
    j["iterations"] = s.iterations;
    j["status"] = s.status;
    if (!s.abort_reason.empty()) j["abort_reason"] = s.abort_reason;
    j["final_f"] = s.final_f ? nlohmann::ordered_json(*s.final_f) : nlohmann::ordered_json(nullptr);
    j["best_f"] = s.best_f ? nlohmann::ordered_json(*s.best_f) : nlohmann::ordered_json(nullptr);
    j["final_residual"] = s.final_residual;
    j["wall_seconds"] = s.wall_seconds;
    return j;
}

} // namespace projsub
