#include "csid/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace csid {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace

std::string format_csv(const ResultTable& table) {
    std::string out = kResultCsvHeader;
    out += '\n';
    for (const auto& r : table.rows) {
        out += r.method;
        out += ',';
        out += r.swept_param;
        out += ',';
        out += fmt_double(r.swept_value);
        out += ',';
        out += std::to_string(r.trials);
        out += ',';
        out += fmt_double(r.mean_distortion);
        out += ',';
        out += fmt_double(r.std_distortion);
        out += ',';
        out += fmt_double(r.mean_convergence_iter);
        out += ',';
        out += fmt_double(r.mean_pilots);
        out += ',';
        out += fmt_double(r.wall_time_s);
        out += '\n';
    }
    return out;
}

void emit_csv(const ResultTable& table, const std::string& path) {
    write_file(path, format_csv(table));
}

ResultTable parse_csv_string(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty results CSV");
    ResultTable table;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_fields(line);
        if (f.size() != 9) throw std::runtime_error("bad results CSV row: " + line);
        ResultRow r;
        r.method = f[0];
        r.swept_param = f[1];
        r.swept_value = std::stod(f[2]);
        r.trials = std::stoi(f[3]);
        r.mean_distortion = std::stod(f[4]);
        r.std_distortion = std::stod(f[5]);
        r.mean_convergence_iter = std::stod(f[6]);
        r.mean_pilots = std::stod(f[7]);
        r.wall_time_s = std::stod(f[8]);
        table.rows.push_back(std::move(r));
    }
    return table;
}

ResultTable parse_csv(const std::string& path) { return parse_csv_string(read_file(path)); }

std::string format_trajectory_csv(const TrajectoryTable& table) {
    std::string out = "method,iteration,mean_distortion";
    for (std::size_t t = 0; t < table.per_trial.size(); ++t) {
        char buf[24];
        std::snprintf(buf, sizeof(buf), ",trial_%03zu", t);
        out += buf;
    }
    out += '\n';
    for (std::size_t i = 0; i < table.iterations.size(); ++i) {
        out += table.method;
        out += ',';
        out += std::to_string(table.iterations[i]);
        out += ',';
        out += fmt_double(table.mean[i]);
        for (const auto& trial : table.per_trial) {
            out += ',';
            out += fmt_double(trial[i]);
        }
        out += '\n';
    }
    return out;
}

void emit_trajectory_csv(const TrajectoryTable& table, const std::string& path) {
    write_file(path, format_trajectory_csv(table));
}

TrajectoryTable parse_trajectory_csv(const std::string& path) {
    std::istringstream in(read_file(path));
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty trajectory CSV: " + path);
    const auto header = split_fields(line);
    if (header.size() < 3 || header[0] != "method")
        throw std::runtime_error("bad trajectory CSV header: " + path);
    const std::size_t n_trials = header.size() - 3;

    TrajectoryTable table;
    table.per_trial.resize(n_trials);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_fields(line);
        if (f.size() != header.size())
            throw std::runtime_error("bad trajectory CSV row: " + line);
        table.method = f[0];
        table.iterations.push_back(std::stoll(f[1]));
        table.mean.push_back(std::stod(f[2]));
        for (std::size_t t = 0; t < n_trials; ++t) table.per_trial[t].push_back(std::stod(f[3 + t]));
    }
    return table;
}

}  // namespace csid
