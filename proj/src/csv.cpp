#include "fembem/driver.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace fembem {

namespace {

constexpr const char* kHeader =
    "level,n_elements,n_vertices,eta,eta1,eta2,err_h1,n_marked,theta,t_solve,t_estimate,t_mark,t_refine";

void append_number(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17e", v);
    out += buf;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> fields(1);
    for (char c : line) {
        if (c == ',') fields.emplace_back();
        else fields.back() += c;
    }
    return fields;
}

double to_double(const std::string& s, int line_no) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size())
        throw InputError("csv line " + std::to_string(line_no) + ": bad number '" + s + "'");
    return v;
}

int to_int(const std::string& s, int line_no) {
    const double v = to_double(s, line_no);
    if (v != std::floor(v)) throw InputError("csv line " + std::to_string(line_no) + ": expected integer");
    return static_cast<int>(v);
}

}  // namespace

std::string emit_csv(std::span<const AdaptiveRecord> records, const CsvOptions& options) {
    std::string out = kHeader;
    out += '\n';
    for (const auto& r : records) {
        out += std::to_string(r.level) + ',' + std::to_string(r.n_elements) + ',' + std::to_string(r.n_vertices) + ',';
        append_number(out, r.eta);
        out += ',';
        append_number(out, r.eta1);
        out += ',';
        append_number(out, r.eta2);
        out += ',';
        if (r.err_h1) append_number(out, *r.err_h1);
        out += ',' + std::to_string(r.n_marked) + ',';
        append_number(out, r.theta);
        for (double t : {r.t_solve, r.t_estimate, r.t_mark, r.t_refine}) {
            out += ',';
            append_number(out, options.timings ? t : 0.0);
        }
        out += '\n';
    }
    return out;
}

std::vector<AdaptiveRecord> parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw InputError("csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kHeader) throw InputError("csv: unexpected header");
    std::vector<AdaptiveRecord> records;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != 13) throw InputError("csv line " + std::to_string(line_no) + ": expected 13 fields");
        AdaptiveRecord r;
        r.level = to_int(f[0], line_no);
        r.n_elements = to_int(f[1], line_no);
        r.n_vertices = to_int(f[2], line_no);
        r.eta = to_double(f[3], line_no);
        r.eta1 = to_double(f[4], line_no);
        r.eta2 = to_double(f[5], line_no);
        if (!f[6].empty()) r.err_h1 = to_double(f[6], line_no);
        r.n_marked = to_int(f[7], line_no);
        r.theta = to_double(f[8], line_no);
        r.t_solve = to_double(f[9], line_no);
        r.t_estimate = to_double(f[10], line_no);
        r.t_mark = to_double(f[11], line_no);
        r.t_refine = to_double(f[12], line_no);
        records.push_back(r);
    }
    return records;
}

}  // namespace fembem
