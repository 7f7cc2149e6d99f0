#include "lti/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace lti {

std::string format_double(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, end);
}

namespace {

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: keep LF on any host
    if (!out) throw ParseError(path, 0, "cannot open file for writing");
    return out;
}

std::string strip(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& tok, const std::string& path, int line) {
    std::string t = strip(tok);
    if (t.empty()) throw ParseError(path, line, "empty numeric field");
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || !std::isfinite(v))
        throw ParseError(path, line, "bad numeric value '" + t + "'");
    return v;
}

// Two-column numeric CSV body after a fixed header.
std::vector<std::pair<double, double>> read_two_columns(
    const std::string& path, const std::string& expected_header) {
    std::ifstream in = open_in(path);
    std::string line;
    int lineno = 0;
    if (!std::getline(in, line))
        throw ParseError(path, 1, "missing header");
    ++lineno;
    if (strip(line) != expected_header)
        throw ParseError(path, 1, "expected header '" + expected_header + "'");
    std::vector<std::pair<double, double>> rows;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = strip(line);
        if (s.empty() || s[0] == '#') continue;
        auto comma = s.find(',');
        if (comma == std::string::npos || s.find(',', comma + 1) != std::string::npos)
            throw ParseError(path, lineno, "expected exactly two fields");
        rows.emplace_back(parse_number(s.substr(0, comma), path, lineno),
                          parse_number(s.substr(comma + 1), path, lineno));
    }
    return rows;
}

}  // namespace

PiecewiseConstantSignal read_signal_csv(const std::string& path) {
    PiecewiseConstantSignal u;
    for (auto& [t, level] : read_two_columns(path, "t,level")) {
        u.breakpoints.push_back(t);
        u.levels.push_back(level);
    }
    try {
        u.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(path, 0, e.what());
    }
    return u;
}

void write_signal_csv(const std::string& path, const PiecewiseConstantSignal& u) {
    std::ofstream out = open_out(path);
    out << "t,level\n";
    for (std::size_t i = 0; i < u.breakpoints.size(); ++i)
        out << format_double(u.breakpoints[i]) << ','
            << format_double(u.levels[i]) << '\n';
}

Dataset read_dataset_csv(const std::string& path) {
    Dataset data;
    data.samples = read_two_columns(path, "t,y");
    try {
        data.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(path, 0, e.what());
    }
    return data;
}

void write_dataset_csv(const std::string& path, const Dataset& data) {
    std::ofstream out = open_out(path);
    out << "t,y\n";
    for (const auto& [t, y] : data.samples)
        out << format_double(t) << ',' << format_double(y) << '\n';
}

void write_model_csv(const std::string& path, const std::string& spec_text,
                     double lambda, const std::vector<double>& times,
                     const Eigen::VectorXd& c) {
    std::ofstream out = open_out(path);
    out << "# kernel: " << spec_text << '\n';
    out << "# lambda: " << format_double(lambda) << '\n';
    out << "t_i,c_i\n";
    for (std::size_t i = 0; i < times.size(); ++i)
        out << format_double(times[i]) << ','
            << format_double(c(static_cast<Eigen::Index>(i))) << '\n';
}

void write_gram_csv(const std::string& path, const GramMatrix& K) {
    std::ofstream out = open_out(path);
    out << "i,j,value\n";
    for (Eigen::Index i = 0; i < K.entries.rows(); ++i)
        for (Eigen::Index j = 0; j < K.entries.cols(); ++j)
            out << i << ',' << j << ',' << format_double(K.entries(i, j)) << '\n';
}

void write_weights_csv(const std::string& path,
                       const std::vector<double>& omegas,
                       const Eigen::VectorXd& d) {
    std::ofstream out = open_out(path);
    out << "k,omega,d_k\n";
    for (Eigen::Index k = 0; k < d.size(); ++k)
        out << k << ',' << format_double(omegas[static_cast<std::size_t>(k)])
            << ',' << format_double(d(k)) << '\n';
}

void write_curve_csv(const std::string& path, const std::string& header,
                     const std::vector<double>& x, const std::vector<double>& y) {
    std::ofstream out = open_out(path);
    out << header << '\n';
    for (std::size_t i = 0; i < x.size(); ++i)
        out << format_double(x[i]) << ',' << format_double(y[i]) << '\n';
}

std::vector<std::pair<std::string, std::string>> read_config_file(
    const std::string& path) {
    std::ifstream in = open_in(path);
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = strip(line);
        if (s.empty() || s[0] == '#') continue;
        auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ParseError(path, lineno, "expected 'key = value'");
        std::string key = strip(s.substr(0, eq));
        std::string value = strip(s.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ParseError(path, lineno, "empty key or value");
        entries.emplace_back(std::move(key), std::move(value));
    }
    return entries;
}

}  // namespace lti
